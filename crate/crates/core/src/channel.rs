//! Small-scale fading: L-tap channel impulse responses, their
//! frequency-domain images, and the pilot structures used for training.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::LargeScaleMap;
use crate::rng::{complex_gaussian, substream, SimRng};

/// Array dimensions of a realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelDims {
    pub antennas: usize,
    pub subcarriers: usize,
    pub taps: usize,
}

/// Which base stations a realization is generated for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Receivers {
    All,
    Only(Vec<usize>),
}

/// Per-drop small-scale fading.
///
/// `cir` holds `h[i][k][j][t]` and `fd` holds `g[i][k][j][n]`, each an
/// M-vector, for every receiving BS listed in `receivers`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub cells: usize,
    pub users: usize,
    pub dims: ChannelDims,
    pub receivers: Vec<usize>,
    cir: Vec<Complex64>,
    fd: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn generate(
        ls: &LargeScaleMap,
        dims: ChannelDims,
        receivers: Receivers,
        rng: &mut SimRng,
    ) -> Result<Self> {
        let ChannelDims {
            antennas: m,
            subcarriers: n,
            taps: l,
        } = dims;
        if l == 0 || m == 0 || n % l != 0 {
            return Err(Error::Config(format!(
                "taps L = {l} must divide subcarriers N = {n}, with M = {m} > 0"
            )));
        }
        let receivers = match receivers {
            Receivers::All => (0..ls.cells).collect(),
            Receivers::Only(v) => {
                if let Some(bad) = v.iter().find(|&&i| i >= ls.cells) {
                    return Err(Error::Config(format!("receiver BS {bad} out of range")));
                }
                v
            }
        };
        let (c, k) = (ls.cells, ls.users);
        let links = receivers.len() * k * c;
        let mut cir = vec![Complex64::new(0.0, 0.0); links * l * m];
        for (r, &i) in receivers.iter().enumerate() {
            for user in 0..k {
                for j in 0..c {
                    let var = ls.beta(i, user, j) / l as f64;
                    let base = ((r * k + user) * c + j) * l * m;
                    for z in &mut cir[base..base + l * m] {
                        *z = complex_gaussian(rng, var);
                    }
                }
            }
        }
        let fd = cir_to_fd_all(&cir, links, m, n, l);
        Ok(Self {
            cells: c,
            users: k,
            dims,
            receivers,
            cir,
            fd,
        })
    }

    fn link(&self, rx: usize, user: usize, cell: usize) -> usize {
        (rx * self.users + user) * self.cells + cell
    }

    /// Replaces every link's taps, `taps[link][t][m]` in (rx, user, cell)
    /// order, and recomputes the frequency responses.
    pub fn with_taps(mut self, taps: &[Vec<Vec<Complex64>>]) -> Result<Self> {
        let ChannelDims {
            antennas: m,
            subcarriers: n,
            taps: l,
        } = self.dims;
        let links = self.receivers.len() * self.users * self.cells;
        if taps.len() != links {
            return Err(Error::Shape {
                expected: links,
                got: taps.len(),
            });
        }
        let flat: Vec<Complex64> = taps.iter().flatten().flatten().copied().collect();
        if flat.len() != links * l * m {
            return Err(Error::Shape {
                expected: links * l * m,
                got: flat.len(),
            });
        }
        self.fd = cir_to_fd_all(&flat, links, m, n, l);
        self.cir = flat;
        Ok(self)
    }

    /// Position of BS `bs` in `receivers`.
    pub fn receiver_index(&self, bs: usize) -> Option<usize> {
        self.receivers.iter().position(|&i| i == bs)
    }

    /// Tap `t` of the CIR between receiver slot `rx` and user k of cell j.
    pub fn cir(&self, rx: usize, user: usize, cell: usize, tap: usize) -> &[Complex64] {
        let m = self.dims.antennas;
        let base = (self.link(rx, user, cell) * self.dims.taps + tap) * m;
        &self.cir[base..base + m]
    }

    /// Frequency response at subcarrier `n`.
    pub fn fd(&self, rx: usize, user: usize, cell: usize, sub: usize) -> &[Complex64] {
        let m = self.dims.antennas;
        let base = (self.link(rx, user, cell) * self.dims.subcarriers + sub) * m;
        &self.fd[base..base + m]
    }

    /// All L taps of one link, as owned vectors.
    pub fn taps_of(&self, rx: usize, user: usize, cell: usize) -> Vec<Vec<Complex64>> {
        (0..self.dims.taps)
            .map(|t| self.cir(rx, user, cell, t).to_vec())
            .collect()
    }
}

/// Generates channels towards every BS of the drop.
pub fn gen_channel(ls: &LargeScaleMap, dims: ChannelDims, seed: u64) -> Result<ChannelRealization> {
    ChannelRealization::generate(ls, dims, Receivers::All, &mut substream(seed, &[]))
}

// cir layout per link: [t][m]; fd layout per link: [n][m].
fn cir_to_fd_all(cir: &[Complex64], links: usize, m: usize, n: usize, l: usize) -> Vec<Complex64> {
    let fft = FftPlanner::new().plan_fft_forward(n);
    let mut fd = vec![Complex64::new(0.0, 0.0); links * n * m];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for link in 0..links {
        let cb = link * l * m;
        let fb = link * n * m;
        for a in 0..m {
            buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for t in 0..l {
                buf[t] = cir[cb + t * m + a];
            }
            fft.process(&mut buf);
            for (s, z) in buf.iter().enumerate() {
                fd[fb + s * m + a] = *z;
            }
        }
    }
    fd
}

/// Frequency response of an L-tap channel at all `subcarriers` bins:
/// g_n = sum_t h_t exp(-j 2 pi n t / N).
pub fn cir_to_fd(taps: &[Vec<Complex64>], subcarriers: usize) -> Vec<Vec<Complex64>> {
    let l = taps.len();
    let m = taps.first().map_or(0, Vec::len);
    let flat: Vec<Complex64> = taps.iter().flatten().copied().collect();
    let fd = cir_to_fd_all(&flat, 1, m, subcarriers, l);
    fd.chunks(m.max(1)).map(<[Complex64]>::to_vec).collect()
}

/// Recovers the L CIR taps from the frequency response sampled on a pilot
/// set `offset + l * N/L`, l = 0..L-1.
///
/// For `offset = 0` this is h_t = (1/L) sum_l g_{I(l)} exp(j 2 pi l t / L);
/// a nonzero offset adds the phase ramp exp(j 2 pi offset t / N) that the
/// shifted comb introduces.
pub fn fd_to_cir(
    pilot_fd: &[Vec<Complex64>],
    taps: usize,
    offset: usize,
    subcarriers: usize,
) -> Result<Vec<Vec<Complex64>>> {
    if pilot_fd.len() != taps {
        return Err(Error::Shape {
            expected: taps,
            got: pilot_fd.len(),
        });
    }
    let m = pilot_fd.first().map_or(0, Vec::len);
    let scale = 1.0 / taps as f64;
    let mut out = vec![vec![Complex64::new(0.0, 0.0); m]; taps];
    for (t, h) in out.iter_mut().enumerate() {
        let ramp = Complex64::from_polar(1.0, 2.0 * PI * (offset * t) as f64 / subcarriers as f64);
        for (l, g) in pilot_fd.iter().enumerate() {
            let w = Complex64::from_polar(scale, 2.0 * PI * ((l * t) % taps) as f64 / taps as f64)
                * ramp;
            for (a, z) in h.iter_mut().zip(g) {
                *a += w * z;
            }
        }
    }
    Ok(out)
}

/// Orthonormal pilot sequences and comb-type pilot subcarrier sets.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotBook {
    pub tau: usize,
    /// Column-major tau x tau matrix: `psi[k * tau + r]` is entry r of psi_k.
    pub psi: Vec<Complex64>,
    pub smoothness: usize,
    pub subcarrier_sets: Vec<Vec<usize>>,
}

impl PilotBook {
    pub fn sequence(&self, k: usize) -> &[Complex64] {
        &self.psi[k * self.tau..(k + 1) * self.tau]
    }

    pub fn offset(&self, user: usize) -> usize {
        self.subcarrier_sets[user][0]
    }

    /// Pilot sequence index of a user: users sharing a comb get distinct
    /// sequences, and co-indexed users of other cells reuse the same one.
    pub fn pilot_index(&self, user: usize) -> usize {
        user / self.smoothness
    }

    /// Max |(Psi^H Psi - I)_{ab}|.
    pub fn unitarity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.tau {
            for b in 0..self.tau {
                let dot: Complex64 = self
                    .sequence(a)
                    .iter()
                    .zip(self.sequence(b))
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

/// DFT pilot matrix with unit-norm columns; user k uses the comb starting
/// at k mod N_sm and sequence k / N_sm.
pub fn build_pilot_book(
    tau: usize,
    subcarriers: usize,
    taps: usize,
    users: usize,
) -> Result<PilotBook> {
    if tau == 0 || taps == 0 || !subcarriers.is_multiple_of(taps) {
        return Err(Error::Config(format!(
            "need tau >= 1 and L = {taps} dividing N = {subcarriers}"
        )));
    }
    let smoothness = subcarriers / taps;
    let k_max = tau * smoothness;
    if users > k_max {
        return Err(Error::Capacity { users, k_max });
    }
    let norm = 1.0 / (tau as f64).sqrt();
    let mut psi = Vec::with_capacity(tau * tau);
    for k in 0..tau {
        for r in 0..tau {
            psi.push(Complex64::from_polar(
                norm,
                -2.0 * PI * ((r * k) % tau) as f64 / tau as f64,
            ));
        }
    }
    let subcarrier_sets = (0..users)
        .map(|k| (0..taps).map(|l| k % smoothness + l * smoothness).collect())
        .collect();
    Ok(PilotBook {
        tau,
        psi,
        smoothness,
        subcarrier_sets,
    })
}
