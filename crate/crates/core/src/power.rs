//! Power consumption and total energy efficiency.
//!
//! Total power is the PA-scaled radiated power of UL data, DL data and UL
//! pilots, plus the circuit terms: fixed, transceiver chains, channel
//! estimation, coding/decoding, backhaul and linear processing.
//!
//! The UL linear-processing terms convert a per-frame flop count (one frame
//! is N symbols) to a per-symbol rate before multiplying by the symbol rate
//! B (1 - tau/S) xi_u.

use serde::{Deserialize, Serialize};

use crate::analytic::rate_report;
use crate::complexity::{flops_channel_estimation, flops_dl_precoding, flops_fdmrc, flops_trmrc};
use crate::config::{PowerModelConfig, Scheme, SystemConfig};
use crate::error::Result;
use crate::geometry::LargeScaleMap;

/// Radiated UL data, DL data and UL pilot power, each divided by its PA
/// efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiatedPowers {
    pub p_tx_ul: f64,
    pub p_tx_dl: f64,
    pub p_tx_tr: f64,
}

pub fn radiated_powers(
    config: &SystemConfig,
    pm: &PowerModelConfig,
    scheme: Scheme,
) -> Result<RadiatedPowers> {
    let f = config.data_fraction()?;
    let k = config.users as f64;
    let overhead = k / config.coherence_block() as f64;
    let eta = pm.eta_ul(scheme);
    Ok(RadiatedPowers {
        p_tx_ul: k * config.ul_fraction * f * config.ul_power / eta,
        p_tx_dl: k * config.dl_fraction * f * config.dl_power_per_user()? / pm.eta_dl,
        p_tx_tr: k * overhead * config.pilot_power / eta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBreakdown {
    pub scheme: Scheme,
    pub p_tx_ul: f64,
    pub p_tx_dl: f64,
    pub p_tx_tr: f64,
    pub p_fix: f64,
    pub p_tc: f64,
    pub p_ce: f64,
    pub p_cd: f64,
    pub p_bh: f64,
    pub p_lp_dl: f64,
    pub p_lp_ul: f64,
    pub total: f64,
}

impl PowerBreakdown {
    pub const NAMES: [&'static str; 10] = [
        "p_tx_ul", "p_tx_dl", "p_tx_tr", "p_fix", "p_tc", "p_ce", "p_cd", "p_bh", "p_lp_dl",
        "p_lp_ul",
    ];

    pub fn components(&self) -> [f64; 10] {
        [
            self.p_tx_ul,
            self.p_tx_dl,
            self.p_tx_tr,
            self.p_fix,
            self.p_tc,
            self.p_ce,
            self.p_cd,
            self.p_bh,
            self.p_lp_dl,
            self.p_lp_ul,
        ]
    }

    pub fn component_sum(&self) -> f64 {
        self.components().iter().sum()
    }

    /// Circuit part only (everything but the radiated terms).
    pub fn circuit(&self) -> f64 {
        self.p_fix + self.p_tc + self.p_ce + self.p_cd + self.p_bh + self.p_lp_dl + self.p_lp_ul
    }

    fn with_total(mut self) -> Self {
        self.total = self.component_sum();
        self
    }
}

/// DL linear processing: per-symbol precoding plus per-block MRT setup.
pub fn dl_processing_power(config: &SystemConfig, pm: &PowerModelConfig) -> Result<f64> {
    let (per_symbol, setup) = flops_dl_precoding(config.antennas, config.users);
    let l_bs = pm.effective_l_bs();
    let s = config.coherence_block() as f64;
    Ok(
        config.bandwidth_hz * data_share(config) * config.dl_fraction * per_symbol as f64 / l_bs
            + config.bandwidth_hz / s * setup as f64 / l_bs,
    )
}

/// UL linear processing. OFDM charges the user-side IFFTs to the terminals.
pub fn ul_processing_power(
    config: &SystemConfig,
    pm: &PowerModelConfig,
    scheme: Scheme,
) -> Result<f64> {
    let (m, k, n, l) = (
        config.antennas,
        config.users,
        config.subcarriers,
        config.taps,
    );
    let symbol_rate = config.bandwidth_hz * data_share(config) * config.ul_fraction;
    let per_frame = match scheme {
        Scheme::Ofdm => {
            let total = flops_fdmrc(m, k, n)?;
            let terminal = (k * 5 * n) as u64 * n.trailing_zeros() as u64;
            terminal as f64 / pm.effective_l_mt() + (total - terminal) as f64 / pm.effective_l_bs()
        }
        Scheme::SingleCarrier => flops_trmrc(m, k, n, l)? as f64 / pm.effective_l_bs(),
    };
    Ok(symbol_rate * per_frame / n as f64)
}

// 1 - tau/S with tau = K.
fn data_share(config: &SystemConfig) -> f64 {
    1.0 - config.pilot_length() as f64 / config.coherence_block() as f64
}

/// Circuit power at the given sum rate in bits/s; radiated fields are zero.
pub fn circuit_power(
    config: &SystemConfig,
    pm: &PowerModelConfig,
    scheme: Scheme,
    sum_rate_bps: f64,
) -> Result<PowerBreakdown> {
    let (m, k) = (config.antennas as f64, config.users as f64);
    let s = config.coherence_block() as f64;
    let ce = flops_channel_estimation(config.antennas, config.users, config.pilot_length());
    Ok(PowerBreakdown {
        scheme,
        p_tx_ul: 0.0,
        p_tx_dl: 0.0,
        p_tx_tr: 0.0,
        p_fix: pm.p_fix,
        p_tc: pm.p_syn + m * pm.p_bs + k * pm.p_mt,
        p_ce: config.bandwidth_hz / s * ce as f64 / pm.effective_l_bs(),
        p_cd: sum_rate_bps * (pm.p_cod + pm.p_dec),
        p_bh: sum_rate_bps * pm.p_bt,
        p_lp_dl: dl_processing_power(config, pm)?,
        p_lp_ul: ul_processing_power(config, pm, scheme)?,
        total: 0.0,
    }
    .with_total())
}

/// Radiated plus circuit power at the given sum rate in bits/s.
pub fn power_breakdown(
    config: &SystemConfig,
    pm: &PowerModelConfig,
    scheme: Scheme,
    sum_rate_bps: f64,
) -> Result<PowerBreakdown> {
    let tx = radiated_powers(config, pm, scheme)?;
    Ok(PowerBreakdown {
        p_tx_ul: tx.p_tx_ul,
        p_tx_dl: tx.p_tx_dl,
        p_tx_tr: tx.p_tx_tr,
        ..circuit_power(config, pm, scheme, sum_rate_bps)?
    }
    .with_total())
}

/// One operating point of the EE surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EePoint {
    pub antennas: usize,
    pub users: usize,
    pub scheme: Scheme,
    /// Sum of UL and DL rates in bits/s/Hz.
    pub sum_se: f64,
    /// Bits per Joule.
    pub ee: f64,
    pub power: PowerBreakdown,
}

/// EE = B sum_se / P_total.
pub fn evaluate(
    config: &SystemConfig,
    pm: &PowerModelConfig,
    scheme: Scheme,
    sum_se: f64,
) -> Result<EePoint> {
    let rate = config.bandwidth_hz * sum_se;
    let power = power_breakdown(config, pm, scheme, rate)?;
    Ok(EePoint {
        antennas: config.antennas,
        users: config.users,
        scheme,
        sum_se,
        ee: rate / power.total,
        power,
    })
}

/// EE of a single drop with rates from the closed-form bounds.
pub fn total_ee(
    ls: &LargeScaleMap,
    config: &SystemConfig,
    pm: &PowerModelConfig,
    scheme: Scheme,
) -> Result<EePoint> {
    let report = rate_report(ls, config, scheme)?;
    evaluate(config, pm, scheme, report.sum_se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn radiated_power_hand_values() {
        let cfg = SystemConfig::default();
        let pm = PowerModelConfig::default();
        let sc = radiated_powers(&cfg, &pm, Scheme::SingleCarrier).unwrap();
        // 22 * 0.4 * 0.89 * 0.2 / 0.5
        assert!(rel(sc.p_tx_ul, 3.1328) < 1e-12);
        assert!(rel(sc.p_tx_dl, 2.0 / 0.39) < 1e-12);
        assert!(rel(sc.p_tx_tr, 22.0 * 0.11 * 0.2 / 0.5) < 1e-12);
        let fd = radiated_powers(&cfg, &pm, Scheme::Ofdm).unwrap();
        assert!(rel(fd.p_tx_ul / sc.p_tx_ul, 5.0 / 3.0) < 1e-12);
        assert!(rel(fd.p_tx_tr / sc.p_tx_tr, 5.0 / 3.0) < 1e-12);
        assert_eq!(fd.p_tx_dl, sc.p_tx_dl);
    }

    #[test]
    fn no_users_radiate_nothing() {
        let cfg = SystemConfig {
            users: 0,
            ..SystemConfig::default()
        };
        let tx = radiated_powers(&cfg, &PowerModelConfig::default(), Scheme::Ofdm).unwrap();
        assert_eq!((tx.p_tx_ul, tx.p_tx_dl, tx.p_tx_tr), (0.0, 0.0, 0.0));
    }

    #[test]
    fn overhead_limit_is_an_error() {
        let cfg = SystemConfig {
            users: 200,
            ..SystemConfig::default()
        };
        let err = radiated_powers(&cfg, &PowerModelConfig::default(), Scheme::Ofdm);
        assert!(matches!(err, Err(Error::Overhead { .. })));
    }

    #[test]
    fn empty_system_costs_fixed_and_synthesizer() {
        let cfg = SystemConfig {
            antennas: 0,
            users: 0,
            ..SystemConfig::default()
        };
        let pm = PowerModelConfig::default();
        for scheme in Scheme::BOTH {
            let p = circuit_power(&cfg, &pm, scheme, 0.0).unwrap();
            assert_eq!(p.total, pm.p_fix + pm.p_syn);
        }
    }

    #[test]
    fn channel_estimation_hand_value() {
        let p = circuit_power(
            &SystemConfig::default(),
            &PowerModelConfig::default(),
            Scheme::Ofdm,
            0.0,
        )
        .unwrap();
        // 1e5 * 100 * 22 * 174 / 12.8e9
        assert!((p.p_ce - 2.990_625).abs() < 1e-9);
    }

    #[test]
    fn dl_processing_hand_value() {
        let cfg = SystemConfig::default();
        let pm = PowerModelConfig::default();
        let expect = 20e6 * 0.89 * 0.6 * (100.0 * 174.0) / 12.8e9 + 1e5 * 22.0 * 1398.0 / 12.8e9;
        assert!(rel(dl_processing_power(&cfg, &pm).unwrap(), expect) < 1e-12);
    }

    #[test]
    fn ul_processing_follows_flop_ratio() {
        let cfg = SystemConfig::default();
        let pm = PowerModelConfig::default();
        let td = ul_processing_power(&cfg, &pm, Scheme::SingleCarrier).unwrap();
        let fd = ul_processing_power(&cfg, &pm, Scheme::Ofdm).unwrap();
        let rate = 20e6 * 0.89 * 0.4 / 256.0;
        let trmrc = flops_trmrc(100, 22, 256, 16).unwrap() as f64;
        assert!(rel(td, rate * trmrc / 12.8e9) < 1e-12);
        let terminal = 22.0 * 5.0 * 256.0 * 8.0;
        let bs = flops_fdmrc(100, 22, 256).unwrap() as f64 - terminal;
        assert!(rel(fd, rate * (terminal / 5e9 + bs / 12.8e9)) < 1e-12);
        assert!(td > fd);
    }

    #[test]
    fn components_sum_to_total() {
        let cfg = SystemConfig {
            antennas: 73,
            users: 14,
            ..SystemConfig::default()
        };
        let pm = PowerModelConfig::default();
        for scheme in Scheme::BOTH {
            let p = power_breakdown(&cfg, &pm, scheme, 3.1e8).unwrap();
            assert!(rel(p.component_sum(), p.total) <= 1e-9);
            assert!(p.components().iter().all(|&c| c >= 0.0));
            assert!(rel(p.circuit() + p.p_tx_ul + p.p_tx_dl + p.p_tx_tr, p.total) < 1e-12);
        }
    }

    #[test]
    fn zero_rate_gives_zero_ee() {
        let p = evaluate(
            &SystemConfig::default(),
            &PowerModelConfig::default(),
            Scheme::Ofdm,
            0.0,
        )
        .unwrap();
        assert_eq!(p.ee, 0.0);
        assert!(p.power.total > 0.0);
    }

    #[test]
    fn ee_grows_with_computational_efficiency() {
        let cfg = SystemConfig::default();
        let (mut last_fd, mut last_td, mut last_gap) = (0.0, 0.0, f64::NEG_INFINITY);
        for step in 0..8 {
            let pm = PowerModelConfig {
                ce_scale: 0.5 + 0.25 * step as f64,
                ..PowerModelConfig::default()
            };
            let fd = evaluate(&cfg, &pm, Scheme::Ofdm, 15.0).unwrap().ee;
            let td = evaluate(&cfg, &pm, Scheme::SingleCarrier, 15.0).unwrap().ee;
            assert!(fd > last_fd && td > last_td && td - fd > last_gap);
            (last_fd, last_td, last_gap) = (fd, td, td - fd);
        }
    }

    #[test]
    fn schemes_coincide_when_their_differences_are_removed() {
        let cfg = SystemConfig {
            taps: 1,
            ..SystemConfig::default()
        };
        let pm = PowerModelConfig {
            eta_ul_ofdm: 0.5,
            eta_ul_sc: 0.5,
            ..PowerModelConfig::default()
        };
        let mut fd = evaluate(&cfg, &pm, Scheme::Ofdm, 12.0).unwrap().power;
        let td = evaluate(&cfg, &pm, Scheme::SingleCarrier, 12.0)
            .unwrap()
            .power;
        fd.p_lp_ul = td.p_lp_ul;
        let fd = fd.with_total();
        assert_eq!(fd.total, td.total);
    }

    #[test]
    fn bandwidth_is_not_a_scale_invariant() {
        let pm = PowerModelConfig::default();
        let a = evaluate(&SystemConfig::default(), &pm, Scheme::Ofdm, 15.0).unwrap();
        let wide = SystemConfig {
            bandwidth_hz: 40e6,
            ..SystemConfig::default()
        };
        let b = evaluate(&wide, &pm, Scheme::Ofdm, 15.0).unwrap();
        assert!(b.ee > a.ee && b.ee < 2.0 * a.ee);
    }
}
