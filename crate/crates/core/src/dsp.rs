//! Receiver signal-processing kernels, generic over the sample type so the
//! same code runs on `Complex64` and on the flop-counting `Counted` wrapper.

use std::ops::{Add, AddAssign, Mul, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub trait Sample:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + AddAssign + Send + Sync
{
    fn zero() -> Self;
    /// Lifts a constant without charging any arithmetic.
    fn lift(z: Complex64) -> Self;
    fn conj(self) -> Self;
    fn value(self) -> Complex64;
}

impl Sample for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn lift(z: Complex64) -> Self {
        z
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn value(self) -> Complex64 {
        self
    }
}

/// In-place unnormalized DFT engine.
#[allow(clippy::len_without_is_empty)]
pub trait FftEngine<T: Sample> {
    fn len(&self) -> usize;
    fn forward(&self, buf: &mut [T]);
    /// Unnormalized inverse (no 1/n factor).
    fn inverse(&self, buf: &mut [T]);
}

pub struct RustFft {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl RustFft {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            fwd: planner.plan_fft_forward(len),
            inv: planner.plan_fft_inverse(len),
        }
    }
}

impl FftEngine<Complex64> for RustFft {
    fn len(&self) -> usize {
        self.fwd.len()
    }
    fn forward(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
    }
    fn inverse(&self, buf: &mut [Complex64]) {
        self.inv.process(buf);
    }
}

/// Textbook iterative radix-2 decimation-in-time FFT: (n/2) log2 n
/// butterflies of one complex multiply and two complex adds each.
pub struct Radix2 {
    len: usize,
    twiddles: Vec<Complex64>,
}

impl Radix2 {
    pub fn new(len: usize) -> Self {
        assert!(
            len.is_power_of_two(),
            "radix-2 FFT needs a power-of-two length"
        );
        let twiddles = (0..len / 2)
            .map(|k| {
                Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / len as f64)
            })
            .collect();
        Self { len, twiddles }
    }

    fn run<T: Sample>(&self, buf: &mut [T], inverse: bool) {
        let n = self.len;
        assert_eq!(buf.len(), n);
        let bits = n.trailing_zeros();
        if bits > 0 {
            for i in 0..n {
                let j = i.reverse_bits() >> (usize::BITS - bits);
                if j > i {
                    buf.swap(i, j);
                }
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for start in (0..n).step_by(size) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let w = T::lift(if inverse { w.conj() } else { w });
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            size *= 2;
        }
    }
}

impl<T: Sample> FftEngine<T> for Radix2 {
    fn len(&self) -> usize {
        self.len
    }
    fn forward(&self, buf: &mut [T]) {
        self.run(buf, false);
    }
    fn inverse(&self, buf: &mut [T]) {
        self.run(buf, true);
    }
}

/// sum_m w[m] * y[m], accumulated as one multiply then (M-1) multiply-adds.
pub fn inner_product<T: Sample>(w: &[T], y: &[T]) -> T {
    let mut it = w.iter().zip(y);
    let Some((w0, y0)) = it.next() else {
        return T::zero();
    };
    let mut acc = *w0 * *y0;
    for (a, b) in it {
        acc += *a * *b;
    }
    acc
}

/// FDMRC on one subcarrier: x_hat_k = w_k . y, where `weights[k]` already
/// holds conj(g_hat_k) / M.
pub fn fdmrc_subcarrier<T: Sample>(weights: &[Vec<T>], y: &[T]) -> Vec<T> {
    weights.iter().map(|w| inner_product(w, y)).collect()
}

/// Frequency-domain TRMRC filters for one user: for each antenna, the
/// 2L-point spectrum of the time-reversed conjugate CIR estimate, scaled by
/// 1 / (2L M) so the unnormalized inverse FFT and the 1/M combining factor
/// need no extra arithmetic at detection time.
pub fn trmrc_filters<E: FftEngine<Complex64>>(
    engine: &E,
    cir_hat: &[Vec<Complex64>],
) -> Vec<Vec<Complex64>> {
    let l = cir_hat.len();
    let m = cir_hat[0].len();
    let size = engine.len();
    assert_eq!(size, 2 * l);
    let scale = 1.0 / (size as f64 * m as f64);
    (0..m)
        .map(|a| {
            let mut buf = vec![Complex64::new(0.0, 0.0); size];
            for lp in 0..l {
                buf[lp] = cir_hat[l - 1 - lp][a].conj() * scale;
            }
            engine.forward(&mut buf);
            buf
        })
        .collect()
}

/// Block-transformed received stream: per antenna, the 2L-point spectra of
/// consecutive length-L blocks.
pub fn overlap_add_blocks<T: Sample, E: FftEngine<T>>(
    engine: &E,
    stream: &[Vec<T>],
    taps: usize,
) -> Vec<Vec<Vec<T>>> {
    let size = engine.len();
    stream
        .iter()
        .map(|r| {
            let blocks = r.len().div_ceil(taps);
            (0..blocks)
                .map(|b| {
                    let mut buf = vec![T::zero(); size];
                    let end = ((b + 1) * taps).min(r.len());
                    buf[..end - b * taps].copy_from_slice(&r[b * taps..end]);
                    engine.forward(&mut buf);
                    buf
                })
                .collect()
        })
        .collect()
}

/// TRMRC for one user through fast convolution with overlap-add.
///
/// `blocks` comes from [`overlap_add_blocks`], `filters` from
/// [`trmrc_filters`] (lifted to `T`). Returns s_hat[t], t in 0..n.
pub fn trmrc_overlap_add<T: Sample, E: FftEngine<T>>(
    engine: &E,
    blocks: &[Vec<Vec<T>>],
    filters: &[Vec<T>],
    taps: usize,
    n: usize,
) -> Vec<T> {
    let size = engine.len();
    let mut per_antenna: Vec<Vec<T>> = Vec::with_capacity(blocks.len());
    for (ant_blocks, filt) in blocks.iter().zip(filters) {
        let mut out = vec![T::zero(); (ant_blocks.len() + 1) * taps];
        let mut buf = vec![T::zero(); size];
        for (b, spectrum) in ant_blocks.iter().enumerate() {
            for ((o, x), f) in buf.iter_mut().zip(spectrum).zip(filt) {
                *o = *x * *f;
            }
            engine.inverse(&mut buf);
            let at = b * taps;
            if b == 0 {
                out[..taps].copy_from_slice(&buf[..taps]);
            } else {
                for (o, v) in out[at..at + taps].iter_mut().zip(&buf[..taps]) {
                    *o += *v;
                }
            }
            out[at + taps..at + 2 * taps].copy_from_slice(&buf[taps..]);
        }
        per_antenna.push(out);
    }
    // Output t sits at convolution index t + L - 1.
    let lag = taps - 1;
    let mut acc: Vec<T> = per_antenna[0][lag..lag + n].to_vec();
    for out in &per_antenna[1..] {
        for (a, v) in acc.iter_mut().zip(&out[lag..lag + n]) {
            *a += *v;
        }
    }
    acc
}

/// Direct TRMRC correlation: s_hat[t] = (1/M) sum_l h_hat_l^H r[t + l].
///
/// `stream[m]` is the antenna-m sample stream (length >= n + L - 1) and
/// `cir_hat[l][m]` the estimated taps.
pub fn trmrc_direct(
    stream: &[Vec<Complex64>],
    cir_hat: &[Vec<Complex64>],
    n: usize,
) -> Vec<Complex64> {
    let m = stream.len();
    let scale = 1.0 / m as f64;
    (0..n)
        .map(|t| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, h) in cir_hat.iter().enumerate() {
                for (a, r) in stream.iter().enumerate() {
                    acc += h[a].conj() * r[t + l];
                }
            }
            acc * scale
        })
        .collect()
}
