//! Flop-count models for uplink detection, channel estimation and DL
//! precoding, plus an instrumented counter that runs the receiver kernels on
//! a flop-tallying number type.
//!
//! Conventions: real add or multiply = 1 flop, complex add = 2, complex
//! multiply = 6, length-M complex inner product = 8M - 2, N-point FFT =
//! 5 N log2 N.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn log2_exact(x: usize, what: &str) -> Result<u64> {
    if x == 0 || !x.is_power_of_two() {
        return Err(Error::Config(format!(
            "{what} = {x} must be a power of two"
        )));
    }
    Ok(x.trailing_zeros() as u64)
}

/// FDMRC per OFDM frame of N symbols:
/// K 5N log2 N (user IFFTs) + M 5N log2 N (antenna FFTs) + N K (8M - 2).
pub fn flops_fdmrc(m: usize, k: usize, n: usize) -> Result<u64> {
    let lg = log2_exact(n, "N")?;
    let (m, k, n) = (m as u64, k as u64, n as u64);
    let fft = 5 * n * lg;
    let inner = if m == 0 { 0 } else { n * k * (8 * m - 2) };
    Ok(k * fft + m * fft + inner)
}

/// TRMRC with overlap-add per block of N symbols:
/// K [M (N+L)(10 log2 2L + 14) + 2N(M-1)] + M (N+L) 10 log2 2L.
pub fn flops_trmrc(m: usize, k: usize, n: usize, l: usize) -> Result<u64> {
    let lg = log2_exact(2 * l, "2L")?;
    let (m, k, n, l) = (m as u64, k as u64, n as u64, l as u64);
    let per_user = m * (n + l) * (10 * lg + 14) + 2 * n * m.saturating_sub(1);
    Ok(k * per_user + m * (n + l) * 10 * lg)
}

/// The TRMRC count assembled stage by stage, with mu = (N+L)/L blocks:
/// antenna FFTs M mu 10L log2 2L; per user and antenna mu times a 2L
/// element-wise product (12L), a 2L IFFT and an L-sample overlap add (2L);
/// per user the antenna sum 2N(M-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrmrcStages {
    pub antenna_ffts: u64,
    pub products: u64,
    pub user_iffts: u64,
    pub overlap_adds: u64,
    pub antenna_sum: u64,
}

impl TrmrcStages {
    pub fn total(&self) -> u64 {
        self.antenna_ffts + self.products + self.user_iffts + self.overlap_adds + self.antenna_sum
    }
}

pub fn trmrc_stages(m: usize, k: usize, n: usize, l: usize) -> Result<TrmrcStages> {
    let lg = log2_exact(2 * l, "2L")?;
    let (m, k, n, l) = (m as u64, k as u64, n as u64, l as u64);
    // mu * L = N + L, so every "mu * (x L)" term is exact in integers.
    let mu_l = n + l;
    let fft_2l_per_block = 10 * lg; // 5 (2L) log2(2L) / L
    Ok(TrmrcStages {
        antenna_ffts: m * mu_l * fft_2l_per_block,
        products: k * m * mu_l * 12,
        user_iffts: k * m * mu_l * fft_2l_per_block,
        overlap_adds: k * m * mu_l * 2,
        antenna_sum: k * 2 * n * m.saturating_sub(1),
    })
}

/// Channel estimation per coherence block: M K (8 tau - 2).
pub fn flops_channel_estimation(m: usize, k: usize, tau: usize) -> u64 {
    if m == 0 || k == 0 || tau == 0 {
        return 0;
    }
    (m * k * (8 * tau - 2)) as u64
}

/// DL MRT: (per-symbol precoding M(8K - 2), per-block setup K(14M - 2)).
pub fn flops_dl_precoding(m: usize, k: usize) -> (u64, u64) {
    if m == 0 || k == 0 {
        return (0, 0);
    }
    ((m * (8 * k - 2)) as u64, (k * (14 * m - 2)) as u64)
}

/// Complete per-scheme counts for one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlopCount {
    pub fdmrc_ul: u64,
    pub trmrc_ul: u64,
    pub ce: u64,
    pub dl_precode_per_symbol: u64,
    pub dl_precoder_setup: u64,
}

pub fn flop_count(m: usize, k: usize, n: usize, l: usize, tau: usize) -> Result<FlopCount> {
    let (dl_precode_per_symbol, dl_precoder_setup) = flops_dl_precoding(m, k);
    Ok(FlopCount {
        fdmrc_ul: flops_fdmrc(m, k, n)?,
        trmrc_ul: flops_trmrc(m, k, n, l)?,
        ce: flops_channel_estimation(m, k, tau),
        dl_precode_per_symbol,
        dl_precoder_setup,
    })
}

pub mod instrument {
    //! Flop tallying by running the detection kernels on [`Counted`].

    use std::cell::Cell;
    use std::ops::{Add, AddAssign, Mul, Sub};

    use num_complex::Complex64;

    use crate::dsp::{self, FftEngine, Radix2, Sample};
    use crate::error::{Error, Result};

    thread_local! {
        static FLOPS: Cell<u64> = const { Cell::new(0) };
    }

    fn charge(n: u64) {
        FLOPS.with(|f| f.set(f.get() + n));
    }

    /// Resets this thread's tally and returns the previous value.
    pub fn take() -> u64 {
        FLOPS.with(|f| f.replace(0))
    }

    /// Complex number that charges 2 flops per add/sub and 6 per multiply.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct Counted(pub Complex64);

    impl Add for Counted {
        type Output = Counted;
        fn add(self, o: Counted) -> Counted {
            charge(2);
            Counted(self.0 + o.0)
        }
    }

    impl Sub for Counted {
        type Output = Counted;
        fn sub(self, o: Counted) -> Counted {
            charge(2);
            Counted(self.0 - o.0)
        }
    }

    impl Mul for Counted {
        type Output = Counted;
        fn mul(self, o: Counted) -> Counted {
            charge(6);
            Counted(self.0 * o.0)
        }
    }

    impl AddAssign for Counted {
        fn add_assign(&mut self, o: Counted) {
            charge(2);
            self.0 += o.0;
        }
    }

    impl Sample for Counted {
        fn zero() -> Self {
            Counted(Complex64::new(0.0, 0.0))
        }
        fn lift(z: Complex64) -> Self {
            Counted(z)
        }
        fn conj(self) -> Self {
            Counted(self.0.conj())
        }
        fn value(self) -> Complex64 {
            self.0
        }
    }

    fn lift_all(v: &[Complex64]) -> Vec<Counted> {
        v.iter().copied().map(Counted).collect()
    }

    /// Tally of the FDMRC inner-product stage: `weights[k]` are the
    /// pre-scaled conjugate estimates for one subcarrier, `rx[n]` the
    /// received vectors. Returns (flops, detector outputs per subcarrier).
    pub fn count_fdmrc_inner_products(
        weights: &[Vec<Vec<Complex64>>],
        rx: &[Vec<Complex64>],
    ) -> (u64, Vec<Vec<Complex64>>) {
        take();
        let out = weights
            .iter()
            .zip(rx)
            .map(|(w, y)| {
                let w: Vec<Vec<Counted>> = w.iter().map(|v| lift_all(v)).collect();
                dsp::fdmrc_subcarrier(&w, &lift_all(y))
                    .into_iter()
                    .map(Counted::value)
                    .collect()
            })
            .collect();
        (take(), out)
    }

    /// Full OFDM/FDMRC frame: K user IFFTs, M antenna FFTs, N K inner
    /// products, on `user_symbols[k]` (N) and `antenna_samples[m]` (N).
    pub fn count_fdmrc_pipeline(
        user_symbols: &[Vec<Complex64>],
        antenna_samples: &[Vec<Complex64>],
        weights: &[Vec<Vec<Complex64>>],
    ) -> Result<u64> {
        let n = antenna_samples.first().map_or(0, Vec::len);
        if !n.is_power_of_two() {
            return Err(Error::Config(format!("N = {n} must be a power of two")));
        }
        let engine = Radix2::new(n);
        take();
        for s in user_symbols {
            let mut buf = lift_all(s);
            engine.inverse(&mut buf);
        }
        let m = antenna_samples.len();
        let mut spectra = vec![vec![Counted::zero(); m]; n];
        for (a, r) in antenna_samples.iter().enumerate() {
            let mut buf = lift_all(r);
            engine.forward(&mut buf);
            for (sub, z) in buf.into_iter().enumerate() {
                spectra[sub][a] = z;
            }
        }
        for (w, y) in weights.iter().zip(&spectra) {
            let w: Vec<Vec<Counted>> = w.iter().map(|v| lift_all(v)).collect();
            dsp::fdmrc_subcarrier(&w, y);
        }
        Ok(take())
    }

    /// Full TRMRC overlap-add detection for all users on `stream[m]`
    /// (length N + L - 1) with estimated CIRs `cir_hat[k][l][m]`.
    /// Returns (flops, s_hat per user).
    pub fn count_trmrc_pipeline(
        stream: &[Vec<Complex64>],
        cir_hat: &[Vec<Vec<Complex64>>],
        n: usize,
    ) -> Result<(u64, Vec<Vec<Complex64>>)> {
        let l = cir_hat.first().map_or(0, Vec::len);
        if l == 0 || !(2 * l).is_power_of_two() {
            return Err(Error::Config(format!("L = {l} must be a power of two")));
        }
        let plain = dsp::RustFft::new(2 * l);
        let filters: Vec<Vec<Vec<Counted>>> = cir_hat
            .iter()
            .map(|h| {
                dsp::trmrc_filters(&plain, h)
                    .iter()
                    .map(|f| lift_all(f))
                    .collect()
            })
            .collect();
        let stream: Vec<Vec<Counted>> = stream.iter().map(|r| lift_all(r)).collect();
        let engine = Radix2::new(2 * l);
        take();
        let blocks = dsp::overlap_add_blocks(&engine, &stream, l);
        let out = filters
            .iter()
            .map(|f| {
                dsp::trmrc_overlap_add(&engine, &blocks, f, l, n)
                    .into_iter()
                    .map(Counted::value)
                    .collect()
            })
            .collect();
        Ok((take(), out))
    }

}
