//! Sample-level uplink simulation: pilot training, FDMRC over OFDM,
//! TRMRC over single carrier, and SINR measurement. Serves as the oracle
//! against which the closed-form model is checked.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::INFINITE_SINR;
use crate::channel::{cir_to_fd, fd_to_cir, ChannelDims, ChannelRealization, PilotBook};
use crate::config::Scheme;
use crate::dsp::{
    fdmrc_subcarrier, overlap_add_blocks, trmrc_direct, trmrc_filters, trmrc_overlap_add, RustFft,
};
use crate::error::{Error, Result};
use crate::rng::{complex_gaussian, fill_complex_gaussian, SimRng};

type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Fewest symbol slots accepted by [`measure_sinr`].
pub const MIN_SLOTS: usize = 100;

/// Channel estimates at each receiving BS: CIR taps and the full
/// frequency response, both M-vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedCsi {
    pub receivers: Vec<usize>,
    pub users: usize,
    pub dims: ChannelDims,
    cir_hat: Vec<C64>,
    fd_hat: Vec<C64>,
}

impl EstimatedCsi {
    fn from_cir(
        receivers: Vec<usize>,
        users: usize,
        dims: ChannelDims,
        cir: Vec<Vec<Vec<C64>>>,
    ) -> Self {
        let mut cir_hat = Vec::with_capacity(cir.len() * dims.taps * dims.antennas);
        let mut fd_hat = Vec::with_capacity(cir.len() * dims.subcarriers * dims.antennas);
        for taps in &cir {
            cir_hat.extend(taps.iter().flatten());
            fd_hat.extend(cir_to_fd(taps, dims.subcarriers).iter().flatten());
        }
        Self {
            receivers,
            users,
            dims,
            cir_hat,
            fd_hat,
        }
    }

    /// Genie CSI: each BS knows the exact channels of its own users.
    pub fn perfect(channel: &ChannelRealization) -> Self {
        let cir = channel
            .receivers
            .iter()
            .enumerate()
            .flat_map(|(r, &i)| (0..channel.users).map(move |k| channel.taps_of(r, k, i)))
            .collect();
        Self::from_cir(channel.receivers.clone(), channel.users, channel.dims, cir)
    }

    pub fn cir_hat(&self, rx: usize, user: usize, tap: usize) -> &[C64] {
        let m = self.dims.antennas;
        let base = ((rx * self.users + user) * self.dims.taps + tap) * m;
        &self.cir_hat[base..base + m]
    }

    pub fn fd_hat(&self, rx: usize, user: usize, sub: usize) -> &[C64] {
        let m = self.dims.antennas;
        let base = ((rx * self.users + user) * self.dims.subcarriers + sub) * m;
        &self.fd_hat[base..base + m]
    }

    pub fn taps_of(&self, rx: usize, user: usize) -> Vec<Vec<C64>> {
        (0..self.dims.taps)
            .map(|t| self.cir_hat(rx, user, t).to_vec())
            .collect()
    }
}

/// Frequency-domain training. Every user of every cell sends
/// sqrt(rho_p) psi_k^H on its comb; the BS correlates each pilot subcarrier
/// with psi_k and interpolates the comb to all N subcarriers.
pub fn train_fd(
    channel: &ChannelRealization,
    pilots: &PilotBook,
    rho_p: f64,
    noise_var: f64,
    rng: &mut SimRng,
) -> Result<EstimatedCsi> {
    let ChannelDims {
        antennas: m,
        subcarriers: n,
        taps: l,
    } = channel.dims;
    let users = channel.users;
    if pilots.subcarrier_sets.len() < users {
        return Err(Error::Shape {
            expected: users,
            got: pilots.subcarrier_sets.len(),
        });
    }
    let tau = pilots.tau;
    let amp = rho_p.sqrt();
    let mut cir = Vec::with_capacity(channel.receivers.len() * users);
    // Received pilot block on one subcarrier: y[r][a], r < tau.
    let mut y = vec![ZERO; tau * m];
    for rx in 0..channel.receivers.len() {
        // g_hat on the pilot comb of each user: comb[k][l][a].
        let mut comb = vec![vec![vec![ZERO; m]; l]; users];
        for offset in 0..pilots.smoothness.min(users) {
            let on_comb: Vec<usize> = (offset..users).step_by(pilots.smoothness).collect();
            for slot in 0..l {
                let sub = offset + slot * pilots.smoothness;
                fill_complex_gaussian(rng, &mut y, noise_var);
                for &u in &on_comb {
                    let psi = pilots.sequence(pilots.pilot_index(u));
                    for cell in 0..channel.cells {
                        let g = channel.fd(rx, u, cell, sub);
                        for (r, p) in psi.iter().enumerate() {
                            let c = p.conj() * amp;
                            for (acc, h) in y[r * m..(r + 1) * m].iter_mut().zip(g) {
                                *acc += h * c;
                            }
                        }
                    }
                }
                for &k in &on_comb {
                    let psi = pilots.sequence(pilots.pilot_index(k));
                    let est = &mut comb[k][slot];
                    for (r, p) in psi.iter().enumerate() {
                        let c = p / amp;
                        for (e, v) in est.iter_mut().zip(&y[r * m..(r + 1) * m]) {
                            *e += v * c;
                        }
                    }
                }
            }
        }
        for (k, pilot_fd) in comb.iter().enumerate() {
            cir.push(fd_to_cir(pilot_fd, l, pilots.offset(k), n)?);
        }
    }
    Ok(EstimatedCsi::from_cir(
        channel.receivers.clone(),
        users,
        channel.dims,
        cir,
    ))
}

/// Staggered impulse training: user k of every cell sends one impulse of
/// amplitude sqrt(L rho_p) at channel use k L. Returns the per-user
/// waveforms, each K L samples long.
pub fn td_training_waveform(users: usize, taps: usize, rho_p: f64) -> Vec<Vec<C64>> {
    let amp = (taps as f64 * rho_p).sqrt();
    (0..users)
        .map(|k| {
            let mut w = vec![ZERO; users * taps];
            w[k * taps] = C64::new(amp, 0.0);
            w
        })
        .collect()
}

/// Time-domain training. The received stream is simulated sample by sample
/// from [`td_training_waveform`]; tap t of user k is read off at k L + t.
pub fn train_td(
    channel: &ChannelRealization,
    rho_p: f64,
    noise_var: f64,
    rng: &mut SimRng,
) -> Result<EstimatedCsi> {
    let ChannelDims {
        antennas: m,
        taps: l,
        ..
    } = channel.dims;
    let users = channel.users;
    let waves = td_training_waveform(users, l, rho_p);
    let len = users * l;
    let scale = 1.0 / (l as f64 * rho_p).sqrt();
    let mut cir = Vec::with_capacity(channel.receivers.len() * users);
    for rx in 0..channel.receivers.len() {
        let mut r = vec![vec![ZERO; len]; m];
        for stream in r.iter_mut() {
            fill_complex_gaussian(rng, stream, noise_var);
        }
        for (u, w) in waves.iter().enumerate() {
            for cell in 0..channel.cells {
                for t in 0..l {
                    convolve_tap(&mut r, channel.cir(rx, u, cell, t), w, t, 0, 1.0);
                }
            }
        }
        for k in 0..users {
            cir.push(
                (0..l)
                    .map(|t| (0..m).map(|a| r[a][k * l + t] * scale).collect())
                    .collect(),
            );
        }
    }
    Ok(EstimatedCsi::from_cir(
        channel.receivers.clone(),
        users,
        channel.dims,
        cir,
    ))
}

// r[a][t] += gain * h[a] * s[guard + t - lag] for every t with a valid
// index. Zero symbols are skipped, which keeps impulse training cheap.
fn convolve_tap(r: &mut [Vec<C64>], h: &[C64], s: &[C64], lag: usize, guard: usize, gain: f64) {
    let len = r[0].len();
    for (stream, ha) in r.iter_mut().zip(h) {
        let c = ha * gain;
        for (idx, v) in s.iter().enumerate() {
            if *v == ZERO || idx + lag < guard {
                continue;
            }
            let t = idx + lag - guard;
            if t >= len {
                break;
            }
            stream[t] += c * v;
        }
    }
}

/// Unit-power circular Gaussian data for all users of all cells.
///
/// Each stream holds `guard` symbols of the previous frame, `slots` symbols
/// of the current one and `guard` symbols of the next frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DataFrame {
    pub cells: usize,
    pub users: usize,
    pub slots: usize,
    pub guard: usize,
    symbols: Vec<C64>,
}

impl DataFrame {
    pub fn random(
        cells: usize,
        users: usize,
        slots: usize,
        guard: usize,
        rng: &mut SimRng,
    ) -> Self {
        let mut symbols = vec![ZERO; cells * users * (slots + 2 * guard)];
        fill_complex_gaussian(rng, &mut symbols, 1.0);
        Self {
            cells,
            users,
            slots,
            guard,
            symbols,
        }
    }

    /// Full stream of user k in cell j, guards included.
    pub fn stream(&self, cell: usize, user: usize) -> &[C64] {
        let len = self.slots + 2 * self.guard;
        let base = (cell * self.users + user) * len;
        &self.symbols[base..base + len]
    }

    /// The `slots` symbols of the current frame.
    pub fn current(&self, cell: usize, user: usize) -> &[C64] {
        &self.stream(cell, user)[self.guard..self.guard + self.slots]
    }
}

/// Known transmitted data and detector outputs of the users served by `bs`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRun {
    pub scheme: Scheme,
    pub bs: usize,
    pub users: usize,
    pub slots: usize,
    /// `tx_symbols[k]`: data of user k of cell `bs`.
    pub tx_symbols: Vec<Vec<C64>>,
    /// `rx_estimates[k]`: detector output for user k.
    pub rx_estimates: Vec<Vec<C64>>,
}

impl DetectionRun {
    fn new(scheme: Scheme, bs: usize, data: &DataFrame, rx_estimates: Vec<Vec<C64>>) -> Self {
        Self {
            scheme,
            bs,
            users: data.users,
            slots: data.slots,
            tx_symbols: (0..data.users)
                .map(|k| data.current(bs, k).to_vec())
                .collect(),
            rx_estimates,
        }
    }

    /// Appends the slots of another run of the same users.
    pub fn extend(&mut self, other: &DetectionRun) -> Result<()> {
        if other.users != self.users || other.scheme != self.scheme || other.bs != self.bs {
            return Err(Error::Shape {
                expected: self.users,
                got: other.users,
            });
        }
        for (a, b) in self.tx_symbols.iter_mut().zip(&other.tx_symbols) {
            a.extend_from_slice(b);
        }
        for (a, b) in self.rx_estimates.iter_mut().zip(&other.rx_estimates) {
            a.extend_from_slice(b);
        }
        self.slots += other.slots;
        Ok(())
    }
}

fn receiver_slot(channel: &ChannelRealization, csi: &EstimatedCsi, bs: usize) -> Result<usize> {
    let rx = channel
        .receiver_index(bs)
        .ok_or_else(|| Error::Config(format!("no channel generated towards BS {bs}")))?;
    if csi.receivers.get(rx) != Some(&bs) || csi.dims != channel.dims || csi.users != channel.users
    {
        return Err(Error::Config(format!(
            "CSI does not match the channel at BS {bs}"
        )));
    }
    Ok(rx)
}

fn check_frame(channel: &ChannelRealization, data: &DataFrame) -> Result<()> {
    if data.cells != channel.cells || data.users != channel.users {
        return Err(Error::Shape {
            expected: channel.cells * channel.users,
            got: data.cells * data.users,
        });
    }
    Ok(())
}

/// Per-subcarrier received vectors of one OFDM symbol at receiver slot `rx`:
/// y_n = sum_j sum_u g_{u j n} sqrt(rho) x_{j u}[n] + w_n.
pub fn receive_fd(
    channel: &ChannelRealization,
    rx: usize,
    data: &DataFrame,
    rho: f64,
    noise_var: f64,
    rng: &mut SimRng,
) -> Result<Vec<Vec<C64>>> {
    check_frame(channel, data)?;
    let ChannelDims {
        antennas: m,
        subcarriers: n,
        ..
    } = channel.dims;
    if data.slots != n {
        return Err(Error::Shape {
            expected: n,
            got: data.slots,
        });
    }
    let amp = rho.sqrt();
    let mut y = vec![vec![ZERO; m]; n];
    for (sub, ys) in y.iter_mut().enumerate() {
        fill_complex_gaussian(rng, ys, noise_var);
        for cell in 0..channel.cells {
            for u in 0..channel.users {
                let c = data.current(cell, u)[sub] * amp;
                for (acc, g) in ys.iter_mut().zip(channel.fd(rx, u, cell, sub)) {
                    *acc += g * c;
                }
            }
        }
    }
    Ok(y)
}

/// FDMRC: x_hat = (1/M) g_hat^H y on every subcarrier. `rho_eff` is the
/// per-subcarrier data power after the CP loss.
pub fn detect_fdmrc(
    csi: &EstimatedCsi,
    channel: &ChannelRealization,
    bs: usize,
    data: &DataFrame,
    rho_eff: f64,
    noise_var: f64,
    rng: &mut SimRng,
) -> Result<DetectionRun> {
    let rx = receiver_slot(channel, csi, bs)?;
    let y = receive_fd(channel, rx, data, rho_eff, noise_var, rng)?;
    let m = channel.dims.antennas as f64;
    let mut out = vec![Vec::with_capacity(data.slots); data.users];
    for (sub, ys) in y.iter().enumerate() {
        let weights: Vec<Vec<C64>> = (0..data.users)
            .map(|k| {
                csi.fd_hat(rx, k, sub)
                    .iter()
                    .map(|g| g.conj() / m)
                    .collect()
            })
            .collect();
        for (o, x) in out.iter_mut().zip(fdmrc_subcarrier(&weights, ys)) {
            o.push(x);
        }
    }
    Ok(DetectionRun::new(Scheme::Ofdm, bs, data, out))
}

/// Received single-carrier stream r[a][t], t in 0..N+L-1, at slot `rx`:
/// r[t] = sum_j sum_u sum_l h_{u j l} sqrt(rho) s_{j u}[t - l] + n[t].
/// Samples before 0 and after N-1 come from the neighboring frames.
pub fn receive_td(
    channel: &ChannelRealization,
    rx: usize,
    data: &DataFrame,
    rho: f64,
    noise_var: f64,
    rng: &mut SimRng,
) -> Result<Vec<Vec<C64>>> {
    check_frame(channel, data)?;
    let ChannelDims {
        antennas: m,
        taps: l,
        ..
    } = channel.dims;
    if data.guard + 1 < l {
        return Err(Error::Shape {
            expected: l - 1,
            got: data.guard,
        });
    }
    let len = data.slots + l - 1;
    let mut r = vec![vec![ZERO; len]; m];
    for stream in r.iter_mut() {
        fill_complex_gaussian(rng, stream, noise_var);
    }
    let amp = rho.sqrt();
    for cell in 0..channel.cells {
        for u in 0..channel.users {
            let s = data.stream(cell, u);
            for t in 0..l {
                convolve_tap(&mut r, channel.cir(rx, u, cell, t), s, t, data.guard, amp);
            }
        }
    }
    Ok(r)
}

/// How [`detect_trmrc`] evaluates the time-reversal correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrmrcMethod {
    Direct,
    OverlapAdd,
}

/// TRMRC: s_hat[t] = (1/M) sum_l h_hat_l^H r[t + l] over one frame.
#[allow(clippy::too_many_arguments)]
pub fn detect_trmrc(
    csi: &EstimatedCsi,
    channel: &ChannelRealization,
    bs: usize,
    data: &DataFrame,
    rho: f64,
    noise_var: f64,
    method: TrmrcMethod,
    rng: &mut SimRng,
) -> Result<DetectionRun> {
    let rx = receiver_slot(channel, csi, bs)?;
    let l = channel.dims.taps;
    if data.slots < l {
        return Err(Error::Shape {
            expected: l,
            got: data.slots,
        });
    }
    let r = receive_td(channel, rx, data, rho, noise_var, rng)?;
    let out = trmrc_all(csi, rx, &r, data.slots, method);
    Ok(DetectionRun::new(Scheme::SingleCarrier, bs, data, out))
}

/// TRMRC outputs of every user from an already received stream.
pub fn trmrc_all(
    csi: &EstimatedCsi,
    rx: usize,
    stream: &[Vec<C64>],
    slots: usize,
    method: TrmrcMethod,
) -> Vec<Vec<C64>> {
    let l = csi.dims.taps;
    match method {
        TrmrcMethod::Direct => (0..csi.users)
            .map(|k| trmrc_direct(stream, &csi.taps_of(rx, k), slots))
            .collect(),
        TrmrcMethod::OverlapAdd => {
            let engine = RustFft::new(2 * l);
            let blocks = overlap_add_blocks(&engine, stream, l);
            (0..csi.users)
                .map(|k| {
                    let filters = trmrc_filters(&engine, &csi.taps_of(rx, k));
                    trmrc_overlap_add(&engine, &blocks, &filters, l, slots)
                })
                .collect()
        }
    }
}

/// Per-user SINR of a detection run: with a = E[x_hat x*] / E[|x|^2],
/// SINR = |a|^2 E[|x|^2] / E[|x_hat - a x|^2], capped at [`INFINITE_SINR`].
pub fn measure_sinr(run: &DetectionRun) -> Result<Vec<f64>> {
    if run.slots < MIN_SLOTS {
        return Err(Error::InsufficientSamples {
            min: MIN_SLOTS,
            got: run.slots,
        });
    }
    Ok(run
        .tx_symbols
        .iter()
        .zip(&run.rx_estimates)
        .map(|(x, xh)| sinr_from_samples(x, xh))
        .collect())
}

fn sinr_from_samples(x: &[C64], xh: &[C64]) -> f64 {
    let n = x.len() as f64;
    let px: f64 = x.iter().map(C64::norm_sqr).sum();
    if px == 0.0 {
        return 0.0;
    }
    let cross: C64 = xh.iter().zip(x).map(|(a, b)| a * b.conj()).sum();
    let a = cross / px;
    let err: f64 = xh
        .iter()
        .zip(x)
        .map(|(h, s)| (h - a * s).norm_sqr())
        .sum::<f64>()
        / n;
    let signal = a.norm_sqr() * px / n;
    if err <= signal / INFINITE_SINR {
        INFINITE_SINR
    } else {
        signal / err
    }
}

fn ratio(signal: f64, rest: f64) -> f64 {
    if rest <= signal / INFINITE_SINR {
        INFINITE_SINR
    } else {
        signal / rest
    }
}

/// Instantaneous FDMRC SINR with the actual channels known: `[k][n]`.
pub fn instantaneous_sinr_fd(
    csi: &EstimatedCsi,
    channel: &ChannelRealization,
    bs: usize,
    rho_eff: f64,
    noise_var: f64,
) -> Result<Vec<Vec<f64>>> {
    let rx = receiver_slot(channel, csi, bs)?;
    let dot = |w: &[C64], g: &[C64]| -> C64 { w.iter().zip(g).map(|(a, b)| a.conj() * b).sum() };
    Ok((0..channel.users)
        .map(|k| {
            (0..channel.dims.subcarriers)
                .map(|n| {
                    let w = csi.fd_hat(rx, k, n);
                    let mut signal = 0.0;
                    let mut rest = noise_var * w.iter().map(C64::norm_sqr).sum::<f64>();
                    for cell in 0..channel.cells {
                        for u in 0..channel.users {
                            let p = rho_eff * dot(w, channel.fd(rx, u, cell, n)).norm_sqr();
                            if cell == bs && u == k {
                                signal = p;
                            } else {
                                rest += p;
                            }
                        }
                    }
                    ratio(signal, rest)
                })
                .collect()
        })
        .collect())
}

/// Instantaneous TRMRC SINR with the actual channels known. The detector
/// output for user k is sum_{j,u,d} c_{ju}[d] s_{ju}[t + d] + noise with
/// c_{ju}[d] = (1/M) sum_l h_hat_l^H h_{ju, l-d}; everything but the
/// d = 0 own term is interference.
pub fn instantaneous_sinr_td(
    csi: &EstimatedCsi,
    channel: &ChannelRealization,
    bs: usize,
    rho: f64,
    noise_var: f64,
) -> Result<Vec<f64>> {
    let rx = receiver_slot(channel, csi, bs)?;
    let ChannelDims {
        antennas: m,
        taps: l,
        ..
    } = channel.dims;
    let mf = m as f64;
    let dot = |w: &[C64], g: &[C64]| -> C64 { w.iter().zip(g).map(|(a, b)| a.conj() * b).sum() };
    Ok((0..channel.users)
        .map(|k| {
            let est = csi.taps_of(rx, k);
            let noise =
                noise_var * est.iter().flatten().map(C64::norm_sqr).sum::<f64>() / (mf * mf);
            let mut signal = 0.0;
            let mut rest = noise;
            for cell in 0..channel.cells {
                for u in 0..channel.users {
                    // Correlations q[l][t] = h_hat_l^H h_t, then c[d] = sum_l q[l][l - d].
                    let q: Vec<Vec<C64>> = est
                        .iter()
                        .map(|e| {
                            (0..l)
                                .map(|t| dot(e, channel.cir(rx, u, cell, t)))
                                .collect()
                        })
                        .collect();
                    for d in -(l as isize - 1)..(l as isize) {
                        let mut c = ZERO;
                        for (li, ql) in q.iter().enumerate() {
                            let t = li as isize - d;
                            if (0..l as isize).contains(&t) {
                                c += ql[t as usize];
                            }
                        }
                        let p = rho * (c / mf).norm_sqr();
                        if cell == bs && u == k && d == 0 {
                            signal = p;
                        } else {
                            rest += p;
                        }
                    }
                }
            }
            ratio(signal, rest)
        })
        .collect())
}

/// Adds independent CN(0, var) noise to a copy of `x`.
pub fn add_noise(x: &[C64], var: f64, rng: &mut SimRng) -> Vec<C64> {
    x.iter().map(|s| s + complex_gaussian(rng, var)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{build_pilot_book, Receivers};
    use crate::geometry::{LargeScaleMap, Point};
    use crate::rng::substream;

    fn map(cells: usize, users: usize, beta: f64, nop: f64) -> LargeScaleMap {
        LargeScaleMap::from_beta(
            cells,
            users,
            vec![beta; cells * users * cells],
            nop,
            vec![Point { x: 0.0, y: 0.0 }; cells * users],
        )
    }

    fn dims(m: usize, n: usize, l: usize) -> ChannelDims {
        ChannelDims {
            antennas: m,
            subcarriers: n,
            taps: l,
        }
    }

    fn channel(cells: usize, users: usize, d: ChannelDims, seed: u64) -> ChannelRealization {
        let ls = map(cells, users, 1.0, 0.0);
        ChannelRealization::generate(&ls, d, Receivers::All, &mut substream(seed, &[])).unwrap()
    }

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn noiseless_single_cell_training_is_exact() {
        let ch = channel(1, 3, dims(4, 32, 4), 1);
        let book = build_pilot_book(3, 32, 4, 3).unwrap();
        let mut rng = substream(2, &[]);
        let fd = train_fd(&ch, &book, 0.5, 0.0, &mut rng).unwrap();
        let td = train_td(&ch, 0.5, 0.0, &mut rng).unwrap();
        for k in 0..3 {
            for t in 0..4 {
                assert!(close(fd.cir_hat(0, k, t), ch.cir(0, k, 0, t), 1e-12));
                assert!(close(td.cir_hat(0, k, t), ch.cir(0, k, 0, t), 1e-12));
            }
            for n in 0..32 {
                assert!(close(fd.fd_hat(0, k, n), ch.fd(0, k, 0, n), 1e-12));
            }
        }
    }

    #[test]
    fn noiseless_multicell_training_is_pure_contamination() {
        let ch = channel(7, 2, dims(3, 16, 4), 5);
        let book = build_pilot_book(2, 16, 4, 2).unwrap();
        let mut rng = substream(6, &[]);
        let fd = train_fd(&ch, &book, 1.0, 0.0, &mut rng).unwrap();
        let td = train_td(&ch, 1.0, 0.0, &mut rng).unwrap();
        for rx in [0usize, 4] {
            for k in 0..2 {
                for n in 0..16 {
                    let sum: Vec<C64> = (0..3)
                        .map(|a| (0..7).map(|j| ch.fd(rx, k, j, n)[a]).sum())
                        .collect();
                    assert!(close(fd.fd_hat(rx, k, n), &sum, 1e-12));
                }
                for t in 0..4 {
                    let sum: Vec<C64> = (0..3)
                        .map(|a| (0..7).map(|j| ch.cir(rx, k, j, t)[a]).sum())
                        .collect();
                    assert!(close(td.cir_hat(rx, k, t), &sum, 1e-12));
                }
            }
        }
    }

    #[test]
    fn training_impulse_energy() {
        let w = td_training_waveform(3, 8, 0.2);
        for (k, wk) in w.iter().enumerate() {
            let window: f64 = wk[k * 8..(k + 1) * 8].iter().map(C64::norm_sqr).sum();
            assert!((window - 8.0 * 0.2).abs() < 1e-12);
            let total: f64 = wk.iter().map(C64::norm_sqr).sum();
            assert_eq!(total, window);
        }
    }

    #[test]
    fn zero_input_gives_zero_output() {
        let ch = channel(1, 2, dims(4, 16, 4), 3);
        let csi = EstimatedCsi::perfect(&ch);
        let mut data = DataFrame::random(1, 2, 16, 3, &mut substream(1, &[]));
        data.symbols.iter_mut().for_each(|z| *z = ZERO);
        let mut rng = substream(2, &[]);
        let fd = detect_fdmrc(&csi, &ch, 0, &data, 1.0, 0.0, &mut rng).unwrap();
        let td = detect_trmrc(
            &csi,
            &ch,
            0,
            &data,
            1.0,
            0.0,
            TrmrcMethod::OverlapAdd,
            &mut rng,
        )
        .unwrap();
        for run in [fd, td] {
            assert!(run.rx_estimates.iter().flatten().all(|z| z.norm() < 1e-15));
        }
    }

    #[test]
    fn fdmrc_two_antenna_hand_value() {
        // One user, flat channel g = (1+j, 2), N = 1, symbol x = 1, no noise.
        let g = vec![C64::new(1.0, 1.0), C64::new(2.0, 0.0)];
        let ch = channel(1, 1, dims(2, 1, 1), 0)
            .with_taps(&[vec![g]])
            .unwrap();
        let csi = EstimatedCsi::perfect(&ch);
        let mut data = DataFrame::random(1, 1, 1, 0, &mut substream(0, &[]));
        data.symbols[0] = C64::new(1.0, 0.0);
        let run = detect_fdmrc(&csi, &ch, 0, &data, 1.0, 0.0, &mut substream(0, &[])).unwrap();
        // (1/2)(|1+j|^2 + 4) = 3
        assert!((run.rx_estimates[0][0] - C64::new(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn trmrc_methods_agree() {
        let ch = channel(2, 3, dims(4, 64, 8), 9);
        let csi = EstimatedCsi::perfect(&ch);
        let data = DataFrame::random(2, 3, 64, 7, &mut substream(1, &[]));
        let a = detect_trmrc(
            &csi,
            &ch,
            1,
            &data,
            1.0,
            0.1,
            TrmrcMethod::Direct,
            &mut substream(2, &[]),
        )
        .unwrap();
        let b = detect_trmrc(
            &csi,
            &ch,
            1,
            &data,
            1.0,
            0.1,
            TrmrcMethod::OverlapAdd,
            &mut substream(2, &[]),
        )
        .unwrap();
        for (x, y) in a.rx_estimates.iter().zip(&b.rx_estimates) {
            let peak = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(close(x, y, 1e-9 * peak));
        }
    }

    #[test]
    fn single_tap_trmrc_equals_flat_fdmrc() {
        let ch = channel(2, 2, dims(6, 32, 1), 4);
        let csi = EstimatedCsi::perfect(&ch);
        let data = DataFrame::random(2, 2, 32, 0, &mut substream(3, &[]));
        let fd0 = detect_fdmrc(&csi, &ch, 0, &data, 0.7, 0.0, &mut substream(8, &[])).unwrap();
        let td0 = detect_trmrc(
            &csi,
            &ch,
            0,
            &data,
            0.7,
            0.0,
            TrmrcMethod::Direct,
            &mut substream(8, &[]),
        )
        .unwrap();
        for (x, y) in fd0.rx_estimates.iter().zip(&td0.rx_estimates) {
            assert!(close(x, y, 1e-12));
        }
    }

    #[test]
    fn frame_shorter_than_taps_is_rejected() {
        let ch = channel(1, 1, dims(2, 8, 8), 0);
        let csi = EstimatedCsi::perfect(&ch);
        let data = DataFrame::random(1, 1, 4, 7, &mut substream(0, &[]));
        let err = detect_trmrc(
            &csi,
            &ch,
            0,
            &data,
            1.0,
            0.0,
            TrmrcMethod::Direct,
            &mut substream(0, &[]),
        );
        assert!(matches!(err, Err(Error::Shape { .. })));
    }

    #[test]
    fn sinr_of_unit_noise_is_zero_db() {
        let mut rng = substream(11, &[]);
        let x: Vec<C64> = (0..20_000)
            .map(|_| complex_gaussian(&mut rng, 1.0))
            .collect();
        let xh = add_noise(&x, 1.0, &mut rng);
        let run = DetectionRun {
            scheme: Scheme::Ofdm,
            bs: 0,
            users: 1,
            slots: x.len(),
            tx_symbols: vec![x.clone()],
            rx_estimates: vec![xh],
        };
        let s = measure_sinr(&run).unwrap()[0];
        assert!((10.0 * s.log10()).abs() < 0.1, "{s}");
        let clean = DetectionRun {
            rx_estimates: vec![x.iter().map(|z| z * 2.0).collect()],
            ..run.clone()
        };
        assert_eq!(measure_sinr(&clean).unwrap()[0], INFINITE_SINR);
        let short = DetectionRun { slots: 99, ..run };
        assert!(matches!(
            measure_sinr(&short),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn fd_estimation_noise_variance() {
        let (m, noise, rho) = (8usize, 0.3, 0.5);
        let ls = map(1, 2, 1.0, 0.0);
        let d = dims(m, 16, 4);
        let book = build_pilot_book(2, 16, 4, 2).unwrap();
        let mut rng = substream(77, &[]);
        let (mut acc, mut cnt) = (0.0, 0usize);
        for _ in 0..1250 {
            let ch = ChannelRealization::generate(&ls, d, Receivers::All, &mut rng).unwrap();
            let est = train_fd(&ch, &book, rho, noise, &mut rng).unwrap();
            for n in [0usize, 5] {
                for (e, g) in est.fd_hat(0, 1, n).iter().zip(ch.fd(0, 1, 0, n)) {
                    acc += (e - g).norm_sqr();
                    cnt += 1;
                }
            }
        }
        let var = acc / cnt as f64;
        assert!((var / (noise / rho) - 1.0).abs() < 0.03, "{var}");
    }

    #[test]
    fn td_estimation_noise_variance() {
        let (m, noise, rho, l) = (8usize, 0.3, 0.5, 4usize);
        let ls = map(1, 2, 1.0, 0.0);
        let mut rng = substream(78, &[]);
        let (mut acc, mut cnt) = (0.0, 0usize);
        for _ in 0..1250 {
            let ch = ChannelRealization::generate(&ls, dims(m, 16, l), Receivers::All, &mut rng)
                .unwrap();
            let est = train_td(&ch, rho, noise, &mut rng).unwrap();
            for (e, g) in est.cir_hat(0, 1, 2).iter().zip(ch.cir(0, 1, 0, 2)) {
                acc += (e - g).norm_sqr();
                cnt += 1;
            }
        }
        let var = acc / cnt as f64;
        let target = noise / (l as f64 * rho);
        assert!((var / target - 1.0).abs() < 0.03, "{var} vs {target}");
    }

    #[test]
    fn transmitted_power_matches_scheme() {
        // Received energy per antenna and slot with a unit single-tap channel
        // and no noise equals the data power.
        let mut rng = substream(5, &[]);
        let data = DataFrame::random(1, 1, 4096, 0, &mut rng);
        let ls = map(1, 1, 1.0, 0.0);
        let ch = ChannelRealization::generate(&ls, dims(1, 4096, 1), Receivers::All, &mut rng)
            .unwrap()
            .with_taps(&[vec![vec![C64::new(1.0, 0.0)]]])
            .unwrap();
        let gamma = 4096.0 / 4111.0;
        let y = receive_fd(&ch, 0, &data, gamma * 0.2, 0.0, &mut rng).unwrap();
        let p_fd: f64 = y.iter().map(|v| v[0].norm_sqr()).sum::<f64>() / 4096.0;
        let r = receive_td(&ch, 0, &data, 0.2, 0.0, &mut rng).unwrap();
        let p_td: f64 = r[0].iter().map(C64::norm_sqr).sum::<f64>() / 4096.0;
        let px: f64 = data.current(0, 0).iter().map(C64::norm_sqr).sum::<f64>() / 4096.0;
        assert!((px - 1.0).abs() < 0.05);
        assert!((p_fd / px - gamma * 0.2).abs() < 1e-12);
        assert!((p_td / px - 0.2).abs() < 1e-12);
    }

    #[test]
    fn matched_filter_hardens_to_beta() {
        let beta = 0.37;
        let ls = map(1, 1, beta, 0.0);
        let mut rng = substream(12, &[]);
        let ch =
            ChannelRealization::generate(&ls, dims(4096, 16, 1), Receivers::All, &mut rng).unwrap();
        let csi = EstimatedCsi::perfect(&ch);
        let data = DataFrame::random(1, 1, 16, 0, &mut rng);
        let run = detect_fdmrc(&csi, &ch, 0, &data, 1.0, 0.0, &mut rng).unwrap();
        for (xh, x) in run.rx_estimates[0].iter().zip(&run.tx_symbols[0]) {
            assert!(((xh / x).re / beta - 1.0).abs() < 0.1);
        }
    }

    #[test]
    fn self_interference_falls_as_one_over_m() {
        // Single cell and user, perfect CSI, no noise: only ISI remains.
        let mut mean = Vec::new();
        for m in [64usize, 256] {
            let ls = map(1, 1, 1.0, 0.0);
            let mut acc = 0.0;
            for drop in 0..200 {
                let mut rng = substream(13, &[m as u64, drop]);
                let ch =
                    ChannelRealization::generate(&ls, dims(m, 64, 8), Receivers::All, &mut rng)
                        .unwrap();
                let csi = EstimatedCsi::perfect(&ch);
                acc += 1.0 / instantaneous_sinr_td(&csi, &ch, 0, 1.0, 0.0).unwrap()[0];
            }
            mean.push(acc / 200.0);
        }
        // Mean interference-to-signal ratio.
        let growth = mean[0] / mean[1];
        assert!((growth / 4.0 - 1.0).abs() < 0.15, "{mean:?}");
        // Each lag d != 0 carries (L - |d|) / (M L^2) of the signal power.
        let isr = 7.0 / (8.0 * 256.0);
        assert!((mean[1] / isr - 1.0).abs() < 0.1, "{mean:?}");
    }
}
