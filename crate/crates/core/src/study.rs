//! Monte Carlo drivers: EE surfaces over (M, K), optimum search, scenario
//! sweeps and link-level validation campaigns.
//!
//! Every drop draws from its own substream keyed by the seed and the drop
//! index, and per-drop results are summed in drop order, so outputs are
//! bit-identical for any thread count. Rates are averaged over drops first;
//! EE is then computed from the mean sum rate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{downlink_terms, prelog, sinr_ul, uplink_terms, Link, CENTER};
use crate::channel::{build_pilot_book, ChannelDims, ChannelRealization, Receivers};
use crate::config::{PowerModelConfig, Scheme, SystemConfig};
use crate::error::{Error, Result};
use crate::geometry::{build_layout, drop_users_with, CellLayout, LargeScaleMap};
use crate::linklevel::{
    detect_fdmrc, detect_trmrc, instantaneous_sinr_fd, instantaneous_sinr_td, measure_sinr,
    train_fd, train_td, DataFrame, DetectionRun, TrmrcMethod,
};
use crate::power::{evaluate, PowerBreakdown};
use crate::rng::{substream, SimRng};

/// Drops used when none are requested.
pub const DESK_DROPS: usize = 1_000;
/// Drop count of the full-scale campaign.
pub const FULL_DROPS: usize = 100_000;

// Drops summed per parallel batch; bounds memory at full scale.
const BATCH: usize = 1_024;

// Substream domains.
const TAG_SURFACE: u64 = 1;
const TAG_VALIDATE: u64 = 2;

/// M in {10, 15, ..., 200}.
pub fn default_m_grid() -> Vec<usize> {
    (10..=200).step_by(5).collect()
}

/// K in {2, 4, ..., 40}.
pub fn default_k_grid() -> Vec<usize> {
    (2..=40).step_by(2).collect()
}

/// Computational-efficiency multipliers 1.0, 1.05, ..., 2.0.
pub fn default_ce_grid() -> Vec<f64> {
    (0..=20).map(|i| 1.0 + 0.05 * i as f64).collect()
}

/// (r_cell, d_min, L) ladder of the cell-densification sweep.
pub const CELL_SCHEDULE: [(f64, f64, usize); 5] = [
    (500.0, 50.0, 16),
    (400.0, 40.0, 8),
    (300.0, 30.0, 4),
    (200.0, 20.0, 2),
    (100.0, 10.0, 1),
];

/// Drop-averaged sum rates (bits/s/Hz) of the central cell at one (M, K).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanRates {
    pub antennas: usize,
    pub users: usize,
    pub ul_ofdm: f64,
    pub ul_sc: f64,
    pub dl: f64,
}

impl MeanRates {
    pub fn sum_se(&self, scheme: Scheme) -> f64 {
        self.dl
            + match scheme {
                Scheme::Ofdm => self.ul_ofdm,
                Scheme::SingleCarrier => self.ul_sc,
            }
    }
}

/// Mean rates over the whole grid, ordered by M then K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSurface {
    pub points: Vec<MeanRates>,
    pub drops: usize,
    pub seed: u64,
}

fn sorted_unique(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn point_config(config: &SystemConfig, m: usize, k: usize) -> SystemConfig {
    SystemConfig {
        antennas: m,
        users: k,
        ..config.clone()
    }
}

/// Rejects empty grids, zero drops and every (M, K) the configuration
/// cannot serve, listing all offending points.
pub fn check_grid(
    config: &SystemConfig,
    m_grid: &[usize],
    k_grid: &[usize],
    drops: usize,
) -> Result<()> {
    if m_grid.is_empty() || k_grid.is_empty() {
        return Err(Error::Config("M and K grids must be non-empty".into()));
    }
    if drops == 0 {
        return Err(Error::Config("at least one drop is required".into()));
    }
    if m_grid.contains(&0) || k_grid.contains(&0) {
        return Err(Error::Config(
            "grid values of M and K must be positive".into(),
        ));
    }
    let bad: Vec<String> = sorted_unique(k_grid)
        .into_iter()
        .filter_map(|k| {
            point_config(config, m_grid[0], k)
                .validate()
                .err()
                .map(|e| format!("K={k} ({e})"))
        })
        .collect();
    if !bad.is_empty() {
        return Err(Error::Config(format!(
            "unsupported grid points: {}",
            bad.join(", ")
        )));
    }
    Ok(())
}

// Per-drop sum rates for every M of the grid at fixed K: [ul_ofdm, ul_sc, dl].
fn drop_rates(
    ls: &LargeScaleMap,
    config: &SystemConfig,
    m_grid: &[usize],
) -> Result<Vec<[f64; 3]>> {
    let ul = uplink_terms(ls, config)?;
    let dl = downlink_terms(ls, config)?;
    let gamma = config.cp_factor();
    let (pf, pt, pd) = (
        prelog(config, Link::UlOfdm)?,
        prelog(config, Link::UlSingleCarrier)?,
        prelog(config, Link::Dl)?,
    );
    Ok(m_grid
        .iter()
        .map(|&m| {
            let m = m as f64;
            let mut acc = [0.0; 3];
            for (u, d) in ul.iter().zip(&dl) {
                acc[0] += pf * u.sinr(m, gamma).ln_1p();
                acc[1] += pt * u.sinr(m, 1.0).ln_1p();
                acc[2] += pd * d.sinr(m).ln_1p();
            }
            acc.map(|x| x / std::f64::consts::LN_2)
        })
        .collect())
}

/// Runs `f(drop)` for `drops` drops in parallel and sums the per-drop
/// vectors in drop order.
fn ordered_sum<F>(drops: usize, width: usize, f: F) -> Result<Vec<[f64; 3]>>
where
    F: Fn(u64) -> Result<Vec<[f64; 3]>> + Sync,
{
    let mut total = vec![[0.0; 3]; width];
    for start in (0..drops).step_by(BATCH) {
        let end = (start + BATCH).min(drops);
        let batch: Vec<Vec<[f64; 3]>> = (start..end)
            .into_par_iter()
            .map(|d| f(d as u64))
            .collect::<Result<_>>()?;
        for per_drop in &batch {
            for (t, v) in total.iter_mut().zip(per_drop) {
                for c in 0..3 {
                    t[c] += v[c];
                }
            }
        }
    }
    Ok(total)
}

/// Drop-averaged rates on the (M, K) grid. Drops for a given K are shared
/// by all M and both schemes.
pub fn rate_surface(
    config: &SystemConfig,
    m_grid: &[usize],
    k_grid: &[usize],
    drops: usize,
    seed: u64,
) -> Result<RateSurface> {
    check_grid(config, m_grid, k_grid, drops)?;
    let layout = build_layout(config)?;
    let ms = sorted_unique(m_grid);
    let ks = sorted_unique(k_grid);
    let mut by_k = Vec::with_capacity(ks.len());
    for &k in &ks {
        let cfg = point_config(config, ms[0], k);
        let sums = ordered_sum(drops, ms.len(), |d| {
            let mut rng = substream(seed, &[TAG_SURFACE, k as u64, d]);
            let ls = drop_users_with(&layout, &cfg, &mut rng)?;
            drop_rates(&ls, &cfg, &ms)
        })?;
        by_k.push(sums);
    }
    let n = drops as f64;
    let mut points = Vec::with_capacity(ms.len() * ks.len());
    for (mi, &m) in ms.iter().enumerate() {
        for (ki, &k) in ks.iter().enumerate() {
            let [ul_ofdm, ul_sc, dl] = by_k[ki][mi];
            points.push(MeanRates {
                antennas: m,
                users: k,
                ul_ofdm: ul_ofdm / n,
                ul_sc: ul_sc / n,
                dl: dl / n,
            });
        }
    }
    Ok(RateSurface {
        points,
        drops,
        seed,
    })
}

/// Both schemes at one (M, K).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EePoint {
    pub antennas: usize,
    pub users: usize,
    pub ee_sc: f64,
    pub ee_ofdm: f64,
    pub se_sc: f64,
    pub se_ofdm: f64,
    pub power_sc: PowerBreakdown,
    pub power_ofdm: PowerBreakdown,
    pub drops: usize,
    pub seed: u64,
}

impl EePoint {
    pub fn ee(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Ofdm => self.ee_ofdm,
            Scheme::SingleCarrier => self.ee_sc,
        }
    }

    pub fn se(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Ofdm => self.se_ofdm,
            Scheme::SingleCarrier => self.se_sc,
        }
    }

    pub fn power(&self, scheme: Scheme) -> &PowerBreakdown {
        match scheme {
            Scheme::Ofdm => &self.power_ofdm,
            Scheme::SingleCarrier => &self.power_sc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub antennas: usize,
    pub users: usize,
    pub ee: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub grid: Vec<EePoint>,
    pub argmax_sc: Optimum,
    pub argmax_ofdm: Optimum,
    pub config: SystemConfig,
    pub power_model: PowerModelConfig,
    pub seed: u64,
    pub drops: usize,
}

impl StudyResult {
    pub fn argmax(&self, scheme: Scheme) -> Optimum {
        match scheme {
            Scheme::Ofdm => self.argmax_ofdm,
            Scheme::SingleCarrier => self.argmax_sc,
        }
    }

    /// Winner by maximum EE; ties go to single carrier.
    pub fn winner(&self) -> Scheme {
        if self.argmax_sc.ee >= self.argmax_ofdm.ee {
            Scheme::SingleCarrier
        } else {
            Scheme::Ofdm
        }
    }
}

/// Best point of `points` for `scheme`; ties go to smaller M, then K.
pub fn argmax(points: &[EePoint], scheme: Scheme) -> Option<Optimum> {
    let best = points.iter().max_by(|a, b| {
        a.ee(scheme)
            .total_cmp(&b.ee(scheme))
            .then_with(|| (b.antennas, b.users).cmp(&(a.antennas, a.users)))
    })?;
    Some(Optimum {
        antennas: best.antennas,
        users: best.users,
        ee: best.ee(scheme),
        se: best.se(scheme),
    })
}

/// EE of both schemes on every point of a rate surface.
pub fn ee_from_rates(
    rates: &RateSurface,
    config: &SystemConfig,
    pm: &PowerModelConfig,
) -> Result<StudyResult> {
    pm.validate()?;
    let grid = rates
        .points
        .iter()
        .map(|r| {
            let cfg = point_config(config, r.antennas, r.users);
            let sc = evaluate(
                &cfg,
                pm,
                Scheme::SingleCarrier,
                r.sum_se(Scheme::SingleCarrier),
            )?;
            let ofdm = evaluate(&cfg, pm, Scheme::Ofdm, r.sum_se(Scheme::Ofdm))?;
            Ok(EePoint {
                antennas: r.antennas,
                users: r.users,
                ee_sc: sc.ee,
                ee_ofdm: ofdm.ee,
                se_sc: sc.sum_se,
                se_ofdm: ofdm.sum_se,
                power_sc: sc.power,
                power_ofdm: ofdm.power,
                drops: rates.drops,
                seed: rates.seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let empty = || Error::Config("empty grid".into());
    Ok(StudyResult {
        argmax_sc: argmax(&grid, Scheme::SingleCarrier).ok_or_else(empty)?,
        argmax_ofdm: argmax(&grid, Scheme::Ofdm).ok_or_else(empty)?,
        grid,
        config: config.clone(),
        power_model: pm.clone(),
        seed: rates.seed,
        drops: rates.drops,
    })
}

pub fn ee_surface(
    config: &SystemConfig,
    pm: &PowerModelConfig,
    m_grid: &[usize],
    k_grid: &[usize],
    drops: usize,
    seed: u64,
) -> Result<StudyResult> {
    pm.validate()?;
    let rates = rate_surface(config, m_grid, k_grid, drops, seed)?;
    ee_from_rates(&rates, config, pm)
}

/// Largest relative EE gain of OFDM over single carrier across the grid.
pub fn max_relative_gain(result: &StudyResult) -> f64 {
    result
        .grid
        .iter()
        .filter(|p| p.ee_sc > 0.0)
        .map(|p| (p.ee_ofdm - p.ee_sc) / p.ee_sc)
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSweepRow {
    pub cell_radius: f64,
    pub min_distance: f64,
    pub taps: usize,
    pub result: StudyResult,
}

/// Optimum search for each (r_cell, d_min, L) row of `schedule`. Each row
/// is a new scenario with its own drops from the same seed.
#[allow(clippy::too_many_arguments)]
pub fn cell_radius_sweep(
    config: &SystemConfig,
    pm: &PowerModelConfig,
    schedule: &[(f64, f64, usize)],
    m_grid: &[usize],
    k_grid: &[usize],
    drops: usize,
    seed: u64,
) -> Result<Vec<CellSweepRow>> {
    schedule
        .iter()
        .map(|&(r, d, l)| {
            let cfg = SystemConfig {
                cell_radius: r,
                min_distance: d,
                taps: l,
                ..config.clone()
            };
            cfg.validate()?;
            Ok(CellSweepRow {
                cell_radius: r,
                min_distance: d,
                taps: l,
                result: ee_surface(&cfg, pm, m_grid, k_grid, drops, seed)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CeSweepRow {
    pub ce_scale: f64,
    pub result: StudyResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CeSweep {
    pub rows: Vec<CeSweepRow>,
    /// Smallest scale at which single carrier reaches the OFDM maximum.
    pub crossover: Option<f64>,
}

/// EE maxima as both computational efficiencies are scaled. Rates do not
/// depend on the power model, so one rate surface serves every scale.
pub fn ce_sweep(
    config: &SystemConfig,
    pm: &PowerModelConfig,
    scales: &[f64],
    m_grid: &[usize],
    k_grid: &[usize],
    drops: usize,
    seed: u64,
) -> Result<CeSweep> {
    if scales.is_empty() {
        return Err(Error::Config("ce_scale grid must be non-empty".into()));
    }
    let rates = rate_surface(config, m_grid, k_grid, drops, seed)?;
    let mut sorted = scales.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rows = sorted
        .iter()
        .map(|&s| {
            let scaled = PowerModelConfig {
                ce_scale: s,
                ..pm.clone()
            };
            Ok(CeSweepRow {
                ce_scale: s,
                result: ee_from_rates(&rates, config, &scaled)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let crossover = rows
        .iter()
        .find(|r| r.result.argmax_sc.ee >= r.result.argmax_ofdm.ee)
        .map(|r| r.ce_scale);
    Ok(CeSweep { rows, crossover })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub scheme: Scheme,
    pub antennas: usize,
    pub users: usize,
    pub se: f64,
    pub ee: f64,
}

/// For each M, the EE-maximizing K of each scheme with its (SE, EE).
pub fn tradeoff_curve(
    config: &SystemConfig,
    pm: &PowerModelConfig,
    m_grid: &[usize],
    k_grid: &[usize],
    drops: usize,
    seed: u64,
) -> Result<Vec<TradeoffPoint>> {
    let result = ee_surface(config, pm, m_grid, k_grid, drops, seed)?;
    Ok(tradeoff_from(&result))
}

pub fn tradeoff_from(result: &StudyResult) -> Vec<TradeoffPoint> {
    let ms = sorted_unique(&result.grid.iter().map(|p| p.antennas).collect::<Vec<_>>());
    let mut out = Vec::with_capacity(2 * ms.len());
    for scheme in Scheme::BOTH {
        for &m in &ms {
            let row: Vec<EePoint> = result
                .grid
                .iter()
                .filter(|p| p.antennas == m)
                .copied()
                .collect();
            if let Some(best) = argmax(&row, scheme) {
                out.push(TradeoffPoint {
                    scheme,
                    antennas: m,
                    users: best.users,
                    se: best.se,
                    ee: best.ee,
                });
            }
        }
    }
    out
}

/// Analytic against measured SINR of one scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeValidation {
    pub scheme: Scheme,
    /// |10 log10(mean measured / mean analytic)|, means over users and drops.
    pub sinr_gap_db: f64,
    /// Mean over users and drops of |10 log10(measured / analytic)|. Carries
    /// the sampling noise of each drop's finite fading and symbol budget.
    pub sinr_abs_gap_db: f64,
    /// Mean over users and drops of 10 log10(measured / analytic).
    pub sinr_bias_db: f64,
    /// Mean over users and drops of E[log2(1 + instantaneous SINR)] minus
    /// log2(1 + analytic SINR), in bits per channel use.
    pub rate_gap_bpcu: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub drops: usize,
    pub symbols_per_drop: usize,
    pub frames_per_drop: usize,
    pub seed: u64,
    pub ofdm: SchemeValidation,
    pub sc: SchemeValidation,
}

impl ValidationReport {
    pub fn scheme(&self, scheme: Scheme) -> &SchemeValidation {
        match scheme {
            Scheme::Ofdm => &self.ofdm,
            Scheme::SingleCarrier => &self.sc,
        }
    }
}

// Per user: (analytic, measured, simulated rate) for [ofdm, sc].
type UserSample = [[f64; 3]; 2];

/// Small-scale fading during a validation drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FadingMode {
    /// Channels, training and estimates redrawn every frame.
    PerFrame,
    /// One channel realization and one training per drop.
    PerDrop,
}

fn validate_drop(
    layout: &CellLayout,
    config: &SystemConfig,
    frames: usize,
    mode: FadingMode,
    seed: u64,
    drop: u64,
) -> Result<Vec<UserSample>> {
    let mut rng: SimRng = substream(seed, &[TAG_VALIDATE, drop]);
    let ls = drop_users_with(layout, config, &mut rng)?;
    let dims = ChannelDims {
        antennas: config.antennas,
        subcarriers: config.subcarriers,
        taps: config.taps,
    };
    let pilots = build_pilot_book(
        config.pilot_length(),
        config.subcarriers,
        config.taps,
        config.users,
    )?;
    let (rho, rho_p, noise) = (config.ul_power, config.pilot_power, config.noise_power);
    let rho_fd = config.cp_factor() * rho;
    let (n, guard) = (config.subcarriers, config.taps - 1);
    let users = config.users;
    let mut runs: [Option<DetectionRun>; 2] = [None, None];
    let mut rate = vec![[0.0f64; 2]; users];
    let mut ch = ChannelRealization::generate(&ls, dims, Receivers::Only(vec![CENTER]), &mut rng)?;
    let mut csi_fd = train_fd(&ch, &pilots, rho_p, noise, &mut rng)?;
    let mut csi_td = train_td(&ch, rho_p, noise, &mut rng)?;
    for frame in 0..frames {
        if frame > 0 && mode == FadingMode::PerFrame {
            ch = ChannelRealization::generate(&ls, dims, Receivers::Only(vec![CENTER]), &mut rng)?;
            csi_fd = train_fd(&ch, &pilots, rho_p, noise, &mut rng)?;
            csi_td = train_td(&ch, rho_p, noise, &mut rng)?;
        }
        let csi = &csi_fd;
        let data = DataFrame::random(ch.cells, users, n, 0, &mut rng);
        let fd = detect_fdmrc(csi, &ch, CENTER, &data, rho_fd, noise, &mut rng)?;
        for (r, per_sub) in rate
            .iter_mut()
            .zip(instantaneous_sinr_fd(csi, &ch, CENTER, rho_fd, noise)?)
        {
            r[0] += per_sub.iter().map(|s| s.log2_1p()).sum::<f64>() / n as f64;
        }

        let csi = &csi_td;
        let data = DataFrame::random(ch.cells, users, n, guard, &mut rng);
        let td = detect_trmrc(
            csi,
            &ch,
            CENTER,
            &data,
            rho,
            noise,
            TrmrcMethod::OverlapAdd,
            &mut rng,
        )?;
        for (r, s) in rate
            .iter_mut()
            .zip(instantaneous_sinr_td(csi, &ch, CENTER, rho, noise)?)
        {
            r[1] += s.log2_1p();
        }

        for (slot, run) in runs.iter_mut().zip([fd, td]) {
            match slot {
                Some(acc) => acc.extend(&run)?,
                None => *slot = Some(run),
            }
        }
    }
    let [Some(fd_run), Some(td_run)] = runs else {
        return Err(Error::InsufficientSamples { min: 1, got: 0 });
    };
    let measured = [measure_sinr(&fd_run)?, measure_sinr(&td_run)?];
    let analytic = [
        sinr_ul(&ls, config, Scheme::Ofdm)?,
        sinr_ul(&ls, config, Scheme::SingleCarrier)?,
    ];
    Ok((0..users)
        .map(|k| {
            let mut s = [[0.0; 3]; 2];
            for (i, row) in s.iter_mut().enumerate() {
                *row = [analytic[i][k], measured[i][k], rate[k][i] / frames as f64];
            }
            s
        })
        .collect())
}

trait Log2OnePlus {
    fn log2_1p(self) -> f64;
}

impl Log2OnePlus for f64 {
    fn log2_1p(self) -> f64 {
        self.ln_1p() / std::f64::consts::LN_2
    }
}

/// Sample-level check of the closed-form UL SINR for both schemes.
///
/// Each drop holds its large-scale fading fixed while small-scale fading,
/// training and data are redrawn per frame of N symbols, so the measured
/// SINR averages over the same fading the closed form averages over.
pub fn validate_linklevel(
    config: &SystemConfig,
    drops: usize,
    symbols_per_drop: usize,
    seed: u64,
) -> Result<ValidationReport> {
    validate_linklevel_with(config, drops, symbols_per_drop, FadingMode::PerFrame, seed)
}

pub fn validate_linklevel_with(
    config: &SystemConfig,
    drops: usize,
    symbols_per_drop: usize,
    mode: FadingMode,
    seed: u64,
) -> Result<ValidationReport> {
    config.validate()?;
    if drops == 0 {
        return Err(Error::Config("at least one drop is required".into()));
    }
    let layout = build_layout(config)?;
    let frames = symbols_per_drop.div_ceil(config.subcarriers).max(1);
    let per_drop: Vec<Vec<UserSample>> = (0..drops as u64)
        .into_par_iter()
        .map(|d| validate_drop(&layout, config, frames, mode, seed, d))
        .collect::<Result<_>>()?;
    let summarize = |i: usize, scheme: Scheme| {
        let (mut abs, mut bias, mut rate) = (0.0, 0.0, 0.0);
        let (mut sum_analytic, mut sum_measured, mut count) = (0.0, 0.0, 0usize);
        for s in per_drop.iter().flatten() {
            let [analytic, measured, sim] = s[i];
            let db = 10.0 * (measured / analytic).log10();
            abs += db.abs();
            bias += db;
            rate += sim - analytic.log2_1p();
            sum_analytic += analytic;
            sum_measured += measured;
            count += 1;
        }
        let n = count as f64;
        SchemeValidation {
            scheme,
            sinr_gap_db: (10.0 * (sum_measured / sum_analytic).log10()).abs(),
            sinr_abs_gap_db: abs / n,
            sinr_bias_db: bias / n,
            rate_gap_bpcu: rate / n,
            samples: count,
        }
    };
    Ok(ValidationReport {
        drops,
        symbols_per_drop,
        frames_per_drop: frames,
        seed,
        ofdm: summarize(0, Scheme::Ofdm),
        sc: summarize(1, Scheme::SingleCarrier),
    })
}
