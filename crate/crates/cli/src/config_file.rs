//! `key = value` scenario files. Keys follow the parameter table, with the
//! unit in the key name; values are converted to SI units on load.

use std::collections::BTreeMap;
use std::path::Path;

use mrc_ee::config::dbm_to_watts;
use mrc_ee::{PowerModelConfig, SystemConfig};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: {reason}")]
    Value { key: String, reason: String },
}

/// A loaded scenario plus the raw entries it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub system: SystemConfig,
    pub power: PowerModelConfig,
    pub overrides: BTreeMap<String, String>,
}

#[derive(Clone, Copy)]
enum Kind {
    Count,
    Real,
    Positive,
    Fraction,
}

// (key, kind, setter taking the value already in the key's unit)
type Setter = fn(&mut SystemConfig, &mut PowerModelConfig, f64);

const KEYS: &[(&str, Kind, Setter)] = &[
    ("cells", Kind::Count, |s, _, v| s.cells = v as usize),
    ("r_cell_m", Kind::Positive, |s, _, v| s.cell_radius = v),
    ("d_min_m", Kind::Positive, |s, _, v| s.min_distance = v),
    ("pathloss_exponent", Kind::Positive, |s, _, v| {
        s.pathloss_exponent = v
    }),
    ("shadowing_std_db", Kind::Real, |s, _, v| {
        s.shadowing_std_db = v
    }),
    ("edge_snr_db", Kind::Real, |s, _, v| s.edge_snr_db = v),
    ("antennas", Kind::Count, |s, _, v| s.antennas = v as usize),
    ("users", Kind::Count, |s, _, v| s.users = v as usize),
    ("subcarriers", Kind::Count, |s, _, v| {
        s.subcarriers = v as usize
    }),
    ("taps", Kind::Count, |s, _, v| s.taps = v as usize),
    ("bandwidth_mhz", Kind::Positive, |s, _, v| {
        s.bandwidth_hz = v * 1e6
    }),
    ("coherence_bandwidth_khz", Kind::Positive, |s, _, v| {
        s.coherence_bandwidth_hz = v * 1e3
    }),
    ("coherence_time_ms", Kind::Positive, |s, _, v| {
        s.coherence_time_s = v * 1e-3
    }),
    ("noise_power_dbm", Kind::Real, |s, _, v| {
        s.noise_power = dbm_to_watts(v)
    }),
    ("rho_u_mw", Kind::Positive, |s, _, v| s.ul_power = v * 1e-3),
    ("rho_p_mw", Kind::Positive, |s, _, v| {
        s.pilot_power = v * 1e-3
    }),
    ("dl_radiated_power_w", Kind::Positive, |s, _, v| {
        s.dl_radiated_power = v
    }),
    ("xi_u", Kind::Fraction, |s, _, v| s.ul_fraction = v),
    ("xi_d", Kind::Fraction, |s, _, v| s.dl_fraction = v),
    ("eta_d", Kind::Fraction, |_, p, v| p.eta_dl = v),
    ("eta_uf", Kind::Fraction, |_, p, v| p.eta_ul_ofdm = v),
    ("eta_ut", Kind::Fraction, |_, p, v| p.eta_ul_sc = v),
    ("p_fix_w", Kind::Positive, |_, p, v| p.p_fix = v),
    ("p_syn_w", Kind::Positive, |_, p, v| p.p_syn = v),
    ("p_bs_w", Kind::Positive, |_, p, v| p.p_bs = v),
    ("p_mt_w", Kind::Positive, |_, p, v| p.p_mt = v),
    ("p_cod_w_per_gbit", Kind::Positive, |_, p, v| {
        p.p_cod = v * 1e-9
    }),
    ("p_dec_w_per_gbit", Kind::Positive, |_, p, v| {
        p.p_dec = v * 1e-9
    }),
    ("p_bt_w_per_gbit", Kind::Positive, |_, p, v| {
        p.p_bt = v * 1e-9
    }),
    ("l_bs_gflops_per_w", Kind::Positive, |_, p, v| {
        p.l_bs = v * 1e9
    }),
    ("l_mt_gflops_per_w", Kind::Positive, |_, p, v| {
        p.l_mt = v * 1e9
    }),
    ("ce_scale", Kind::Positive, |_, p, v| p.ce_scale = v),
];

pub fn known_keys() -> impl Iterator<Item = &'static str> {
    KEYS.iter().map(|k| k.0)
}

fn check(key: &str, kind: Kind, v: f64) -> Result<(), LoadError> {
    let bad = |reason: &str| {
        Err(LoadError::Value {
            key: key.to_string(),
            reason: format!("{reason}, got {v}"),
        })
    };
    if !v.is_finite() {
        return bad("must be finite");
    }
    match kind {
        Kind::Count if v < 0.0 || v.fract() != 0.0 => bad("must be a non-negative integer"),
        Kind::Positive if v <= 0.0 => bad("must be positive"),
        Kind::Fraction if !(v > 0.0 && v <= 1.0) => bad("must lie in (0, 1]"),
        _ => Ok(()),
    }
}

/// Parses scenario text. Missing keys keep their defaults.
pub fn parse_config(text: &str) -> Result<Loaded, LoadError> {
    let table: toml::Table = toml::from_str(text).map_err(|e| LoadError::Syntax(e.to_string()))?;
    let mut system = SystemConfig::default();
    let mut power = PowerModelConfig::default();
    let mut overrides = BTreeMap::new();
    for (key, value) in &table {
        let &(_, kind, set) = KEYS
            .iter()
            .find(|k| k.0 == key)
            .ok_or_else(|| LoadError::UnknownKey(key.clone()))?;
        let v = match value {
            toml::Value::Integer(i) => *i as f64,
            toml::Value::Float(f) => *f,
            other => {
                return Err(LoadError::Value {
                    key: key.clone(),
                    reason: format!("expected a number, got {}", other.type_str()),
                })
            }
        };
        check(key, kind, v)?;
        set(&mut system, &mut power, v);
        overrides.insert(key.clone(), value.to_string());
    }
    if system.users > system.max_users() {
        return Err(LoadError::Value {
            key: "users".into(),
            reason: format!(
                "K = {} exceeds K_max = {}",
                system.users,
                system.max_users()
            ),
        });
    }
    system.validate().map_err(|e| LoadError::Value {
        key: blame(
            &table,
            &[
                "users",
                "taps",
                "subcarriers",
                "coherence_bandwidth_khz",
                "coherence_time_ms",
                "cells",
                "d_min_m",
                "r_cell_m",
            ],
        ),
        reason: e.to_string(),
    })?;
    power.validate().map_err(|e| LoadError::Value {
        key: blame(
            &table,
            &[
                "eta_uf",
                "eta_ut",
                "eta_d",
                "l_bs_gflops_per_w",
                "l_mt_gflops_per_w",
            ],
        ),
        reason: e.to_string(),
    })?;
    Ok(Loaded {
        system,
        power,
        overrides,
    })
}

// First candidate key present in the file, for error messages.
fn blame(table: &toml::Table, candidates: &[&str]) -> String {
    candidates
        .iter()
        .find(|k| table.contains_key(**k))
        .unwrap_or(&"<defaults>")
        .to_string()
}

pub fn load_config(path: &Path) -> Result<Loaded, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}
