//! CSV writers and the run manifest.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use mrc_ee::power::PowerBreakdown;
use mrc_ee::study::{CeSweep, CellSweepRow, EePoint, StudyResult, TradeoffPoint, ValidationReport};
use mrc_ee::{PowerModelConfig, Scheme, SystemConfig};
use serde::Serialize;

const SURFACE_HEAD: [&str; 8] = [
    "M",
    "K",
    "scheme",
    "drops",
    "seed",
    "sum_se_bpshz",
    "total_power_w",
    "ee_bits_per_joule",
];

fn header(prefix: &[&str]) -> Vec<String> {
    prefix
        .iter()
        .chain(SURFACE_HEAD.iter())
        .chain(PowerBreakdown::NAMES.iter())
        .map(|s| s.to_string())
        .collect()
}

fn point_fields(p: &EePoint, scheme: Scheme) -> Vec<String> {
    let power = p.power(scheme);
    let mut row = vec![
        p.antennas.to_string(),
        p.users.to_string(),
        scheme.label().to_string(),
        p.drops.to_string(),
        p.seed.to_string(),
        p.se(scheme).to_string(),
        power.total.to_string(),
        p.ee(scheme).to_string(),
    ];
    row.extend(power.components().iter().map(f64::to_string));
    row
}

fn write_points<W: Write>(
    w: &mut csv::Writer<W>,
    prefix: &[String],
    result: &StudyResult,
    schemes: &[Scheme],
) -> csv::Result<()> {
    for p in &result.grid {
        for &s in schemes {
            let mut row = prefix.to_vec();
            row.extend(point_fields(p, s));
            w.write_record(&row)?;
        }
    }
    Ok(())
}

/// `surface.csv`: one row per (M, K, scheme).
pub fn surface_csv<W: Write>(out: W, result: &StudyResult, schemes: &[Scheme]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(&[]))?;
    write_points(&mut w, &[], result, schemes)?;
    w.flush()?;
    Ok(())
}

/// `sweep.csv` for the cell-radius ladder.
pub fn cell_sweep_csv<W: Write>(
    out: W,
    rows: &[CellSweepRow],
    schemes: &[Scheme],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(&["r_cell", "d_min", "L"]))?;
    for r in rows {
        let prefix = [
            r.cell_radius.to_string(),
            r.min_distance.to_string(),
            r.taps.to_string(),
        ];
        write_points(&mut w, &prefix, &r.result, schemes)?;
    }
    w.flush()?;
    Ok(())
}

/// `sweep.csv` for the computational-efficiency ladder.
pub fn ce_sweep_csv<W: Write>(out: W, sweep: &CeSweep, schemes: &[Scheme]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(&["ce_scale"]))?;
    for r in &sweep.rows {
        write_points(&mut w, &[r.ce_scale.to_string()], &r.result, schemes)?;
    }
    w.flush()?;
    Ok(())
}

/// `tradeoff.csv`: the surface schema restricted to each scheme's best K per M.
pub fn tradeoff_csv<W: Write>(
    out: W,
    result: &StudyResult,
    curve: &[TradeoffPoint],
    schemes: &[Scheme],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(&[]))?;
    for t in curve.iter().filter(|t| schemes.contains(&t.scheme)) {
        let p = result
            .grid
            .iter()
            .find(|p| p.antennas == t.antennas && p.users == t.users)
            .expect("tradeoff point comes from the grid");
        w.write_record(point_fields(p, t.scheme))?;
    }
    w.flush()?;
    Ok(())
}

/// `validation.csv`: one row per scheme.
pub fn validation_csv<W: Write>(
    out: W,
    report: &ValidationReport,
    schemes: &[Scheme],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "scheme",
        "drops",
        "symbols_per_drop",
        "seed",
        "sinr_gap_db",
        "sinr_abs_gap_db",
        "sinr_bias_db",
        "rate_gap_bpcu",
        "samples",
    ])?;
    for &s in schemes {
        let v = report.scheme(s);
        w.write_record([
            s.label().to_string(),
            report.drops.to_string(),
            report.symbols_per_drop.to_string(),
            report.seed.to_string(),
            v.sinr_gap_db.to_string(),
            v.sinr_abs_gap_db.to_string(),
            v.sinr_bias_db.to_string(),
            v.rate_gap_bpcu.to_string(),
            v.samples.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Provenance of one run, written as `manifest.toml` next to the CSVs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config_path: Option<PathBuf>,
    pub seed: u64,
    pub drops: usize,
    pub output_dir: PathBuf,
    pub scheme: String,
    pub m_grid: Vec<usize>,
    pub k_grid: Vec<usize>,
    pub overrides: BTreeMap<String, String>,
    pub system: SystemConfig,
    pub power_model: PowerModelConfig,
}

impl RunManifest {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest fields are plain data")
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::write(dir.join("manifest.toml"), self.to_toml())
    }
}
