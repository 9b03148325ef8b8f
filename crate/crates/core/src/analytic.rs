//! Closed-form SINR and achievable-rate lower bounds for the central cell.
//!
//! Uplink (MRC with pilot contamination), per user k of cell i:
//!
//! ```text
//!            M b_iki^2
//! sinr = ------------------------------------------------------------
//!        M sum_{c!=i} b_ikc^2 + a_ik^2 (sum_j sum_k b_ikj + s^2 / (g' p_u))
//! ```
//!
//! with a_ik^2 = sum_c b_ikc + s^2 / p_p and g' the CP factor for OFDM or 1
//! for single carrier.

use serde::{Deserialize, Serialize};

use crate::config::{Scheme, SystemConfig};
use crate::error::{Error, Result};
use crate::geometry::LargeScaleMap;

/// Stand-in for an unbounded SINR.
pub const INFINITE_SINR: f64 = 1e12;

/// Index of the scored (central) cell.
pub const CENTER: usize = 0;

/// Per-user coefficients of the uplink SINR as a function of M and gamma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UplinkTerms {
    pub signal: f64,
    pub coherent: f64,
    pub interference: f64,
    pub noise: f64,
}

impl UplinkTerms {
    pub fn sinr(&self, antennas: f64, gamma: f64) -> f64 {
        antennas * self.signal / (antennas * self.coherent + self.interference + self.noise / gamma)
    }
}

/// Per-user coefficients of the DL MRT SINR as a function of M.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DownlinkTerms {
    pub signal: f64,
    pub coherent: f64,
    pub noncoherent: f64,
}

impl DownlinkTerms {
    pub fn sinr(&self, antennas: f64) -> f64 {
        self.signal / (self.coherent + self.noncoherent / antennas)
    }
}

fn check_powers(config: &SystemConfig) -> Result<()> {
    // Written to reject NaN as well.
    let positive = |x: f64| x > 0.0;
    if !positive(config.ul_power) || !positive(config.noise_power) || !positive(config.pilot_power)
    {
        return Err(Error::Domain(format!(
            "UL power {}, pilot power {} and noise power {} must be positive",
            config.ul_power, config.pilot_power, config.noise_power
        )));
    }
    Ok(())
}

pub fn uplink_terms(ls: &LargeScaleMap, config: &SystemConfig) -> Result<Vec<UplinkTerms>> {
    check_powers(config)?;
    let i = CENTER;
    let total: f64 = (0..ls.users).flat_map(|k| ls.beta_row(i, k).iter()).sum();
    Ok((0..ls.users)
        .map(|k| {
            let own = ls.beta(i, k, i);
            let coherent = ls
                .beta_row(i, k)
                .iter()
                .enumerate()
                .filter(|&(c, _)| c != i)
                .map(|(_, b)| b * b)
                .sum();
            let alpha = ls.alpha_sq(i, k);
            UplinkTerms {
                signal: own * own,
                coherent,
                interference: alpha * total,
                noise: alpha * config.noise_power / config.ul_power,
            }
        })
        .collect())
}

pub fn downlink_terms(ls: &LargeScaleMap, config: &SystemConfig) -> Result<Vec<DownlinkTerms>> {
    check_powers(config)?;
    let rho_d = config.dl_power_per_user()?;
    if rho_d.is_nan() || rho_d <= 0.0 {
        return Err(Error::Domain(format!(
            "DL power per user must be positive, got {rho_d}"
        )));
    }
    let i = CENTER;
    Ok((0..ls.users)
        .map(|k| {
            let own = ls.beta(i, k, i);
            let coherent = (0..ls.cells)
                .filter(|&l| l != i)
                .map(|l| ls.beta(l, k, i).powi(2) / ls.alpha_sq(l, k))
                .sum();
            let received: f64 = (0..ls.cells).map(|l| ls.beta(l, k, i)).sum();
            DownlinkTerms {
                signal: own * own / ls.alpha_sq(i, k),
                coherent,
                noncoherent: ls.users as f64 * received + config.noise_power / rho_d,
            }
        })
        .collect())
}

fn ul_gamma(config: &SystemConfig, scheme: Scheme) -> f64 {
    match scheme {
        Scheme::Ofdm => config.cp_factor(),
        Scheme::SingleCarrier => 1.0,
    }
}

/// Uplink SINR of every central-cell user.
pub fn sinr_ul(ls: &LargeScaleMap, config: &SystemConfig, scheme: Scheme) -> Result<Vec<f64>> {
    let gamma = ul_gamma(config, scheme);
    let m = config.antennas as f64;
    Ok(uplink_terms(ls, config)?
        .iter()
        .map(|t| t.sinr(m, gamma))
        .collect())
}

/// DL MRT SINR of every central-cell user under uniform power rho_d.
pub fn sinr_dl(ls: &LargeScaleMap, config: &SystemConfig) -> Result<Vec<f64>> {
    let m = config.antennas as f64;
    Ok(downlink_terms(ls, config)?
        .iter()
        .map(|t| t.sinr(m))
        .collect())
}

/// M -> infinity limit: b_iki^2 / sum_{c!=i} b_ikc^2.
pub fn sinr_asymptotic(ls: &LargeScaleMap) -> Vec<f64> {
    let i = CENTER;
    (0..ls.users)
        .map(|k| {
            let own = ls.beta(i, k, i);
            let coherent: f64 = (0..ls.cells)
                .filter(|&c| c != i)
                .map(|c| ls.beta(i, k, c).powi(2))
                .sum();
            if coherent > 0.0 {
                (own * own / coherent).min(INFINITE_SINR)
            } else {
                INFINITE_SINR
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Link {
    UlOfdm,
    UlSingleCarrier,
    Dl,
}

impl From<Scheme> for Link {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Ofdm => Link::UlOfdm,
            Scheme::SingleCarrier => Link::UlSingleCarrier,
        }
    }
}

/// Pre-log factor xi * gamma' * (1 - K/S) of the rate bound.
pub fn prelog(config: &SystemConfig, link: Link) -> Result<f64> {
    let f = config.data_fraction()?;
    let gamma = config.cp_factor();
    Ok(match link {
        Link::UlOfdm => config.ul_fraction * gamma * f,
        Link::UlSingleCarrier => config.ul_fraction * f,
        Link::Dl => config.dl_fraction * gamma * f,
    })
}

/// Achievable-rate lower bound in bits/s/Hz.
pub fn rate_lower_bound(sinr: f64, config: &SystemConfig, link: Link) -> Result<f64> {
    Ok(prelog(config, link)? * (1.0 + sinr).log2())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinrReport {
    pub sinr_fd: Vec<f64>,
    pub sinr_td: Vec<f64>,
    pub sinr_dl: Vec<f64>,
    pub sinr_asym: Vec<f64>,
}

pub fn sinr_report(ls: &LargeScaleMap, config: &SystemConfig) -> Result<SinrReport> {
    Ok(SinrReport {
        sinr_fd: sinr_ul(ls, config, Scheme::Ofdm)?,
        sinr_td: sinr_ul(ls, config, Scheme::SingleCarrier)?,
        sinr_dl: sinr_dl(ls, config)?,
        sinr_asym: sinr_asymptotic(ls),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub rate_ul_fd: Vec<f64>,
    pub rate_ul_td: Vec<f64>,
    pub rate_dl: Vec<f64>,
    /// Sum over users of UL + DL rates for the selected scheme.
    pub sum_se: f64,
    pub scheme: Scheme,
}

pub fn rate_report(
    ls: &LargeScaleMap,
    config: &SystemConfig,
    scheme: Scheme,
) -> Result<RateReport> {
    let s = sinr_report(ls, config)?;
    let rates = |v: &[f64], link| -> Result<Vec<f64>> {
        v.iter()
            .map(|&x| rate_lower_bound(x, config, link))
            .collect()
    };
    let rate_ul_fd = rates(&s.sinr_fd, Link::UlOfdm)?;
    let rate_ul_td = rates(&s.sinr_td, Link::UlSingleCarrier)?;
    let rate_dl = rates(&s.sinr_dl, Link::Dl)?;
    let ul = match scheme {
        Scheme::Ofdm => &rate_ul_fd,
        Scheme::SingleCarrier => &rate_ul_td,
    };
    let sum_se = ul.iter().sum::<f64>() + rate_dl.iter().sum::<f64>();
    Ok(RateReport {
        rate_ul_fd,
        rate_ul_td,
        rate_dl,
        sum_se,
        scheme,
    })
}
