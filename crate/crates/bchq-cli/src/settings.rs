//! Run configuration: defaults, flat JSON config file, environment cap.
//! Precedence is flags > config file > defaults.

use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Deserialize;

pub const DEFAULT_MAX_DEGREE: usize = 12;
pub const DEFAULT_LIE_MAX: usize = 12;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOL_EXACT: f64 = 1e-12;
pub const DEFAULT_TOL_NUMERIC: f64 = 1e-10;

/// Hard cap on the expansion degree unless BCH_MAX_DEGREE_CAP raises it.
pub const DEFAULT_DEGREE_CAP: usize = bchq::bch::DEFAULT_DEGREE_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Csv,
    Json,
}

/// Flat JSON config document; every key optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub max_degree: Option<usize>,
    pub lie_max: Option<usize>,
    pub seed: Option<u64>,
    pub tol_exact: Option<f64>,
    pub tol_numeric: Option<f64>,
    pub output_format: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub max_degree: usize,
    pub lie_max: usize,
    pub seed: u64,
    pub tol_exact: f64,
    pub tol_numeric: f64,
    pub format: OutputFormat,
}

impl Settings {
    pub fn resolve(config_path: Option<&Path>, format_flag: Option<OutputFormat>) -> Result<Settings> {
        let file = match config_path {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config file {}", path.display()))?;
                serde_json::from_str::<FileConfig>(&text)
                    .with_context(|| format!("parsing config file {}", path.display()))?
            }
            None => FileConfig::default(),
        };
        let file_format = match file.output_format.as_deref() {
            None => None,
            Some("human") => Some(OutputFormat::Human),
            Some("csv") => Some(OutputFormat::Csv),
            Some("json") => Some(OutputFormat::Json),
            Some(other) => anyhow::bail!("unknown output_format {other:?} in config file"),
        };
        Ok(Settings {
            max_degree: file.max_degree.unwrap_or(DEFAULT_MAX_DEGREE),
            lie_max: file.lie_max.unwrap_or(DEFAULT_LIE_MAX),
            seed: file.seed.unwrap_or(DEFAULT_SEED),
            tol_exact: file.tol_exact.unwrap_or(DEFAULT_TOL_EXACT),
            tol_numeric: file.tol_numeric.unwrap_or(DEFAULT_TOL_NUMERIC),
            format: format_flag.or(file_format).unwrap_or(OutputFormat::Human),
        })
    }
}

/// The effective degree cap: BCH_MAX_DEGREE_CAP when set, 20 otherwise.
pub fn degree_cap() -> Result<usize> {
    match std::env::var("BCH_MAX_DEGREE_CAP") {
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .with_context(|| format!("BCH_MAX_DEGREE_CAP={raw:?} is not a degree")),
        Err(_) => Ok(DEFAULT_DEGREE_CAP),
    }
}

/// Checks a requested degree against the cap and warns about memory above
/// the default table range.
pub fn check_degree(requested: usize) -> Result<()> {
    let cap = degree_cap()?;
    if requested > cap {
        anyhow::bail!(
            "degree {requested} exceeds the cap {cap}; set BCH_MAX_DEGREE_CAP to raise it"
        );
    }
    if requested > DEFAULT_DEGREE_CAP {
        let slices_mb = 3.0 * (1u64 << (requested + 1)) as f64 * 16.0 / 1e6;
        eprintln!(
            "warning: degree {requested} keeps about {:.0} MB of dense expansion slices in memory",
            slices_mb
        );
    }
    Ok(())
}
