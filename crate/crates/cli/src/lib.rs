//! Command-line front end of the energy-efficiency study: scenario files,
//! subcommand dispatch and CSV/manifest output.

pub mod config_file;
pub mod output;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use mrc_ee::study::{self, StudyResult};
use mrc_ee::{Error as CoreError, Scheme};
use thiserror::Error;

use crate::config_file::{load_config, parse_config, LoadError, Loaded};
use crate::output::RunManifest;

/// Drops of a validation campaign when `--drops` is absent.
pub const VALIDATE_DROPS: usize = 200;

#[derive(Debug, Parser)]
#[command(
    name = "mrc-ee",
    version,
    about = "Massive-MIMO uplink TRMRC/SC vs FDMRC/OFDM energy-efficiency study"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Scenario file of `key = value` lines; absent keys take the defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Monte Carlo drops (default 1000, or 200 for `validate`).
    #[arg(long, global = true)]
    pub drops: Option<usize>,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = SchemeFilter::Both)]
    pub scheme: SchemeFilter,
    /// Antenna grid as `start:stop:step` or a comma list.
    #[arg(long, global = true, value_parser = parse_grid)]
    pub m_grid: Option<Grid>,
    /// User grid as `start:stop:step` or a comma list.
    #[arg(long, global = true, value_parser = parse_grid)]
    pub k_grid: Option<Grid>,
    /// Use the full-scale drop count (100000) unless `--drops` is given.
    #[arg(long, global = true)]
    pub full_scale: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// EE of both schemes over the (M, K) grid.
    Surface,
    /// EE-optimal (M, K) of each scheme.
    Optimum,
    /// Optimum search along the cell-radius ladder.
    CellSweep,
    /// Optimum search over computational-efficiency multipliers.
    CeSweep {
        /// Multipliers as a comma list; default 1.0 to 2.0 in steps of 0.05.
        #[arg(long, value_delimiter = ',')]
        ce_grid: Option<Vec<f64>>,
    },
    /// Best K per M for each scheme (SE-EE trade-off).
    Tradeoff,
    /// Link-level check of the closed-form SINR and rate bound.
    Validate {
        #[arg(long, default_value_t = 1000)]
        symbols: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeFilter {
    Sc,
    Ofdm,
    Both,
}

impl SchemeFilter {
    pub fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeFilter::Sc => vec![Scheme::SingleCarrier],
            SchemeFilter::Ofdm => vec![Scheme::Ofdm],
            SchemeFilter::Both => Scheme::BOTH.to_vec(),
        }
    }

    fn label(self) -> &'static str {
        match self {
            SchemeFilter::Sc => "sc",
            SchemeFilter::Ofdm => "ofdm",
            SchemeFilter::Both => "both",
        }
    }
}

/// A parsed `--m-grid`/`--k-grid` value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid(pub Vec<usize>);

/// Parses `a:b:s` (inclusive) or `a,b,c`.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let grid: Vec<usize> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, step] = parts[..] else {
            return Err(format!("expected start:stop:step, got `{s}`"));
        };
        let (a, b, step) = (num(a)?, num(b)?, num(step)?);
        if step == 0 || a > b {
            return Err(format!("empty range `{s}`"));
        }
        (a..=b).step_by(step).collect()
    } else {
        s.split(',').map(num).collect::<Result<_, _>>()?
    };
    if grid.is_empty() {
        return Err("grid is empty".into());
    }
    Ok(Grid(grid))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Load(_) => 2,
            CliError::Core(
                CoreError::Config(_) | CoreError::Capacity { .. } | CoreError::Overhead { .. },
            ) => 2,
            _ => 3,
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn mbit(ee: f64) -> f64 {
    ee / 1e6
}

fn print_optima(result: &StudyResult, schemes: &[Scheme]) {
    for &s in schemes {
        let o = result.argmax(s);
        println!(
            "{:>4}: EE_max = {:.3} Mbit/J at M = {}, K = {} (SE = {:.2} bit/s/Hz)",
            s.label(),
            mbit(o.ee),
            o.antennas,
            o.users,
            o.se
        );
    }
}

/// Runs one subcommand and returns the files it wrote.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let opts = &cli.opts;
    let Loaded {
        system,
        power,
        overrides,
    } = match &opts.config {
        Some(p) => load_config(p)?,
        None => parse_config("")?,
    };
    let drops = opts.drops.unwrap_or(match (&cli.command, opts.full_scale) {
        (Command::Validate { .. }, false) => VALIDATE_DROPS,
        (_, true) => study::FULL_DROPS,
        (_, false) => study::DESK_DROPS,
    });
    let m_grid = opts
        .m_grid
        .clone()
        .map_or_else(study::default_m_grid, |g| g.0);
    let k_grid = opts
        .k_grid
        .clone()
        .map_or_else(study::default_k_grid, |g| g.0);
    let schemes = opts.scheme.schemes();
    std::fs::create_dir_all(&opts.out).map_err(|source| CliError::Io {
        path: opts.out.clone(),
        source,
    })?;

    let (name, files) = match &cli.command {
        Command::Surface | Command::Optimum => {
            let result = study::ee_surface(&system, &power, &m_grid, &k_grid, drops, opts.seed)?;
            let path = opts.out.join("surface.csv");
            output::surface_csv(create(&path)?, &result, &schemes)?;
            print_optima(&result, &schemes);
            if matches!(cli.command, Command::Optimum) {
                let gain = study::max_relative_gain(&result);
                println!(
                    "winner: {} (relative EE gain {:.1}%)",
                    result.winner(),
                    100.0 * gain
                );
            }
            let name = if matches!(cli.command, Command::Surface) {
                "surface"
            } else {
                "optimum"
            };
            (name, vec![path])
        }
        Command::CellSweep => {
            let rows = study::cell_radius_sweep(
                &system,
                &power,
                &study::CELL_SCHEDULE,
                &m_grid,
                &k_grid,
                drops,
                opts.seed,
            )?;
            let path = opts.out.join("sweep.csv");
            output::cell_sweep_csv(create(&path)?, &rows, &schemes)?;
            for r in &rows {
                println!(
                    "r_cell = {} m, d_min = {} m, L = {}",
                    r.cell_radius, r.min_distance, r.taps
                );
                print_optima(&r.result, &schemes);
            }
            ("cell-sweep", vec![path])
        }
        Command::CeSweep { ce_grid } => {
            let scales = ce_grid.clone().unwrap_or_else(study::default_ce_grid);
            let sweep =
                study::ce_sweep(&system, &power, &scales, &m_grid, &k_grid, drops, opts.seed)?;
            let path = opts.out.join("sweep.csv");
            output::ce_sweep_csv(create(&path)?, &sweep, &schemes)?;
            for r in &sweep.rows {
                println!("ce_scale = {}", r.ce_scale);
                print_optima(&r.result, &schemes);
            }
            match sweep.crossover {
                Some(c) => println!("crossover: single carrier reaches OFDM at ce_scale = {c}"),
                None => println!("crossover: none on this grid"),
            }
            ("ce-sweep", vec![path])
        }
        Command::Tradeoff => {
            let result = study::ee_surface(&system, &power, &m_grid, &k_grid, drops, opts.seed)?;
            let curve = study::tradeoff_from(&result);
            let path = opts.out.join("tradeoff.csv");
            output::tradeoff_csv(create(&path)?, &result, &curve, &schemes)?;
            for t in curve.iter().filter(|t| schemes.contains(&t.scheme)) {
                println!(
                    "{:>4}: M = {:>3}, K = {:>2}, SE = {:.2} bit/s/Hz, EE = {:.3} Mbit/J",
                    t.scheme.label(),
                    t.antennas,
                    t.users,
                    t.se,
                    mbit(t.ee)
                );
            }
            ("tradeoff", vec![path])
        }
        Command::Validate { symbols } => {
            let report = study::validate_linklevel(&system, drops, *symbols, opts.seed)?;
            let path = opts.out.join("validation.csv");
            output::validation_csv(create(&path)?, &report, &schemes)?;
            for &s in &schemes {
                let v = report.scheme(s);
                println!(
                    "{:>4}: SINR gap {:.3} dB (per-user {:.3} dB, bias {:+.3} dB), rate gap {:.3} bit/channel use",
                    s.label(),
                    v.sinr_gap_db,
                    v.sinr_abs_gap_db,
                    v.sinr_bias_db,
                    v.rate_gap_bpcu
                );
            }
            ("validate", vec![path])
        }
    };

    let manifest = RunManifest {
        subcommand: name.to_string(),
        config_path: opts.config.clone(),
        seed: opts.seed,
        drops,
        output_dir: opts.out.clone(),
        scheme: opts.scheme.label().to_string(),
        m_grid,
        k_grid,
        overrides,
        system,
        power_model: power,
    };
    manifest.write(&opts.out).map_err(|source| CliError::Io {
        path: opts.out.join("manifest.toml"),
        source,
    })?;
    let mut files = files;
    files.push(opts.out.join("manifest.toml"));
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_syntax() {
        assert_eq!(parse_grid("10:30:10").unwrap().0, vec![10, 20, 30]);
        assert_eq!(parse_grid("10:25:10").unwrap().0, vec![10, 20]);
        assert_eq!(parse_grid("4, 8,16").unwrap().0, vec![4, 8, 16]);
        assert!(parse_grid("10:5:1").is_err());
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("a").is_err());
    }

    #[test]
    fn exit_codes() {
        let cfg = CliError::Core(CoreError::Config("x".into()));
        let run = CliError::Core(CoreError::Domain("x".into()));
        assert_eq!(cfg.exit_code(), 2);
        assert_eq!(run.exit_code(), 3);
        assert_eq!(
            CliError::Load(LoadError::UnknownKey("a".into())).exit_code(),
            2
        );
    }

    #[test]
    fn defaults_of_the_parser() {
        let cli = Cli::try_parse_from(["mrc-ee", "optimum"]).unwrap();
        assert_eq!(cli.opts.seed, 1);
        assert_eq!(cli.opts.scheme, SchemeFilter::Both);
        assert!(cli.opts.drops.is_none());
        let cli = Cli::try_parse_from([
            "mrc-ee", "surface", "--m-grid", "10:20:5", "--k-grid", "2,4",
        ])
        .unwrap();
        assert_eq!(cli.opts.m_grid, Some(Grid(vec![10, 15, 20])));
        assert_eq!(cli.opts.k_grid, Some(Grid(vec![2, 4])));
        assert!(Cli::try_parse_from(["mrc-ee", "nonsense"]).is_err());
    }
}
