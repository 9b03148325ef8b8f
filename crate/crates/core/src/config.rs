//! System and power-model parameters.
//!
//! All quantities are linear SI units (Watts, Hz, meters, seconds). The
//! defaults reproduce the reference scenario: a 7-cell layout of 500 m cells,
//! 20 MHz bandwidth, -96 dBm noise, 200 mW pilot and data power.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uplink waveform/detector pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Frequency-domain MRC under OFDM (cyclic prefix present).
    Ofdm,
    /// Time-reversal MRC under single-carrier transmission (no cyclic prefix).
    SingleCarrier,
}

impl Scheme {
    pub const BOTH: [Scheme; 2] = [Scheme::SingleCarrier, Scheme::Ofdm];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::Ofdm => "ofdm",
            Scheme::SingleCarrier => "sc",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Number of cells C (1 or 7).
    pub cells: usize,
    pub cell_radius: f64,
    pub min_distance: f64,
    pub pathloss_exponent: f64,
    pub shadowing_std_db: f64,
    /// Edge SNR used to calibrate the path-loss intercept: a shadowing-free
    /// user at distance `cell_radius` sees `ul_power * beta / noise_power`
    /// equal to this value.
    pub edge_snr_db: f64,
    /// BS antennas M.
    pub antennas: usize,
    /// Users per cell K.
    pub users: usize,
    /// OFDM subcarriers N (also the SC block length).
    pub subcarriers: usize,
    /// Channel taps L.
    pub taps: usize,
    pub bandwidth_hz: f64,
    pub coherence_bandwidth_hz: f64,
    pub coherence_time_s: f64,
    /// Total receiver noise power in Watts.
    pub noise_power: f64,
    pub ul_power: f64,
    pub pilot_power: f64,
    /// Average radiated DL power, i.e. the product of the DL amplifier draw
    /// and its efficiency.
    pub dl_radiated_power: f64,
    pub ul_fraction: f64,
    pub dl_fraction: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            cells: 7,
            cell_radius: 500.0,
            min_distance: 50.0,
            pathloss_exponent: 3.8,
            shadowing_std_db: 8.0,
            edge_snr_db: 0.0,
            antennas: 100,
            users: 22,
            subcarriers: 256,
            taps: 16,
            bandwidth_hz: 20e6,
            coherence_bandwidth_hz: 100e3,
            coherence_time_s: 2e-3,
            noise_power: dbm_to_watts(-96.0),
            ul_power: 0.2,
            pilot_power: 0.2,
            dl_radiated_power: 2.0,
            ul_fraction: 0.4,
            dl_fraction: 0.6,
        }
    }
}

impl SystemConfig {
    /// Coherence block length S = T_c * W_c in symbols.
    pub fn coherence_block(&self) -> usize {
        (self.coherence_time_s * self.coherence_bandwidth_hz).round() as usize
    }

    /// Pilot length. One orthogonal pilot per served user.
    pub fn pilot_length(&self) -> usize {
        self.users
    }

    pub fn cp_length(&self) -> usize {
        self.taps.saturating_sub(1)
    }

    /// CP power/rate factor gamma = N / (N + N_cp).
    pub fn cp_factor(&self) -> f64 {
        let n = self.subcarriers as f64;
        n / (n + self.cp_length() as f64)
    }

    /// Frequency smoothness interval N_sm = N / L.
    pub fn smoothness_interval(&self) -> usize {
        self.subcarriers / self.taps
    }

    pub fn max_users(&self) -> usize {
        self.pilot_length() * self.smoothness_interval()
    }

    /// Fraction of the coherence block left for data, 1 - K/S.
    pub fn data_fraction(&self) -> Result<f64> {
        let s = self.coherence_block();
        if self.users >= s {
            return Err(Error::Overhead {
                users: self.users,
                block: s,
            });
        }
        Ok(1.0 - self.users as f64 / s as f64)
    }

    /// Per-user DL power rho_d, back-solved from the fixed average radiated
    /// DL power: K * xi_d * (1 - K/S) * rho_d = P_rad.
    pub fn dl_power_per_user(&self) -> Result<f64> {
        let f = self.data_fraction()?;
        if self.users == 0 {
            return Ok(0.0);
        }
        Ok(self.dl_radiated_power / (self.users as f64 * self.dl_fraction * f))
    }

    /// Path-loss intercept G0 from the edge-SNR calibration.
    pub fn pathloss_intercept(&self) -> f64 {
        db_to_linear(self.edge_snr_db) * self.noise_power / self.ul_power
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("cell_radius", self.cell_radius),
            ("min_distance", self.min_distance),
            ("pathloss_exponent", self.pathloss_exponent),
            ("bandwidth_hz", self.bandwidth_hz),
            ("coherence_bandwidth_hz", self.coherence_bandwidth_hz),
            ("coherence_time_s", self.coherence_time_s),
            ("noise_power", self.noise_power),
            ("ul_power", self.ul_power),
            ("pilot_power", self.pilot_power),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.dl_radiated_power < 0.0 || self.shadowing_std_db < 0.0 {
            return Err(Error::Config(
                "dl_radiated_power and shadowing_std_db must be non-negative".into(),
            ));
        }
        if self.min_distance >= self.cell_radius {
            return Err(Error::Config(format!(
                "min_distance {} must be below cell_radius {}",
                self.min_distance, self.cell_radius
            )));
        }
        for (name, v) in [
            ("ul_fraction", self.ul_fraction),
            ("dl_fraction", self.dl_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if self.cells != 1 && self.cells != 7 {
            return Err(Error::Config(format!(
                "only 1 or 7 cells are supported, got {}",
                self.cells
            )));
        }
        if self.taps == 0 || self.subcarriers == 0 || !self.subcarriers.is_multiple_of(self.taps) {
            return Err(Error::Config(format!(
                "taps L = {} must divide subcarriers N = {}",
                self.taps, self.subcarriers
            )));
        }
        if self.users > self.max_users() {
            return Err(Error::Capacity {
                users: self.users,
                k_max: self.max_users(),
            });
        }
        self.data_fraction()?;
        Ok(())
    }
}

/// Power-amplifier efficiencies, circuit powers and computational
/// efficiencies of the consumption model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerModelConfig {
    pub eta_ul_ofdm: f64,
    pub eta_ul_sc: f64,
    pub eta_dl: f64,
    pub p_fix: f64,
    pub p_syn: f64,
    /// Per BS antenna circuit power.
    pub p_bs: f64,
    /// Per mobile-terminal circuit power.
    pub p_mt: f64,
    /// Coding power density, W per bit/s.
    pub p_cod: f64,
    pub p_dec: f64,
    pub p_bt: f64,
    /// BS computational efficiency, flops per Watt.
    pub l_bs: f64,
    pub l_mt: f64,
    /// Common multiplier applied to both computational efficiencies.
    pub ce_scale: f64,
}

impl Default for PowerModelConfig {
    fn default() -> Self {
        Self {
            eta_ul_ofdm: 0.30,
            eta_ul_sc: 0.50,
            eta_dl: 0.39,
            p_fix: 18.0,
            p_syn: 2.0,
            p_bs: 1.0,
            p_mt: 0.1,
            p_cod: 0.1e-9,
            p_dec: 0.8e-9,
            p_bt: 0.25e-9,
            l_bs: 12.8e9,
            l_mt: 5.0e9,
            ce_scale: 1.0,
        }
    }
}

impl PowerModelConfig {
    pub fn eta_ul(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Ofdm => self.eta_ul_ofdm,
            Scheme::SingleCarrier => self.eta_ul_sc,
        }
    }

    pub fn effective_l_bs(&self) -> f64 {
        self.l_bs * self.ce_scale
    }

    pub fn effective_l_mt(&self) -> f64 {
        self.l_mt * self.ce_scale
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eta_ul_ofdm", self.eta_ul_ofdm),
            ("eta_ul_sc", self.eta_ul_sc),
            ("eta_dl", self.eta_dl),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1], got {v}")));
            }
        }
        for (name, v) in [
            ("p_fix", self.p_fix),
            ("p_syn", self.p_syn),
            ("p_bs", self.p_bs),
            ("p_mt", self.p_mt),
            ("p_cod", self.p_cod),
            ("p_dec", self.p_dec),
            ("p_bt", self.p_bt),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("l_bs", self.l_bs),
            ("l_mt", self.l_mt),
            ("ce_scale", self.ce_scale),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_reference_scenario() {
        let c = SystemConfig::default();
        assert_eq!(c.coherence_block(), 200);
        assert!((c.noise_power - 10f64.powf(-12.6)).abs() < 1e-25);
        assert!((c.cp_factor() - 256.0 / 271.0).abs() < 1e-15);
        assert_eq!(c.smoothness_interval(), 16);
        c.validate().unwrap();
        PowerModelConfig::default().validate().unwrap();
    }

    #[test]
    fn overhead_factor_for_22_users() {
        let c = SystemConfig::default();
        assert!((c.data_fraction().unwrap() - 0.89).abs() < 1e-12);
    }

    #[test]
    fn rejects_too_many_users_for_block() {
        let c = SystemConfig {
            users: 200,
            ..SystemConfig::default()
        };
        assert!(matches!(c.data_fraction(), Err(Error::Overhead { .. })));
    }

    #[test]
    fn dl_power_back_solve_keeps_radiated_power() {
        let c = SystemConfig::default();
        let rho_d = c.dl_power_per_user().unwrap();
        let radiated = c.users as f64 * c.dl_fraction * c.data_fraction().unwrap() * rho_d;
        assert!((radiated - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cp_factor_is_one_for_flat_channel() {
        let c = SystemConfig {
            taps: 1,
            ..SystemConfig::default()
        };
        assert_eq!(c.cp_factor(), 1.0);
    }

    #[test]
    fn negative_efficiency_rejected() {
        let pm = PowerModelConfig {
            eta_dl: -0.3,
            ..PowerModelConfig::default()
        };
        assert!(pm.validate().is_err());
    }
}
