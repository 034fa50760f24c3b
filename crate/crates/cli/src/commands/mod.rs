pub mod carriers;
pub mod optics;
pub mod report;
pub mod sweep;
pub mod tables;

use std::path::Path;

use ewall_core::carriers::{carrier_config_from_json, CarrierConfig};
use ewall_core::decoherence::{Model, ReportSettings};
use ewall_core::scenario::load_scenario;
use ewall_core::{Preset, Scenario};

use crate::output::{emit, Format, Table};
use crate::OutputArgs;

pub enum Status {
    Ok,
    /// Output written, but a gated comparison failed.
    Mismatch,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(ewall_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(s) => write!(f, "{s}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<ewall_core::Error> for CliError {
    fn from(e: ewall_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Render `table` to stdout, or to `<dir>/<name>.<ext>` when an output directory is given.
pub fn write_table(table: &Table, name: &str, out: &OutputArgs) -> CliResult<()> {
    let path = match &out.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let ext = match out.format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            Some(dir.join(format!("{name}.{ext}")))
        }
        None => None,
    };
    emit(&table.render(out.format), path.as_deref())?;
    Ok(())
}

/// A preset key or a path to a scenario file.
pub fn scenario_arg(s: &str) -> CliResult<Scenario> {
    match Preset::from_key(s) {
        Some(p) => Ok(p.scenario()),
        None if Path::new(s).exists() => Ok(load_scenario(Path::new(s))?),
        None => Err(CliError::Config(format!(
            "unknown scenario '{s}': expected one of {} or a file path",
            Preset::ALL.map(|p| p.key()).join(", ")
        ))),
    }
}

/// `super-bandgap`, `sub-bandgap`, or a path to a carrier file.
pub fn carrier_arg(s: &str) -> CliResult<CarrierConfig> {
    match s {
        "super-bandgap" => Ok(CarrierConfig::super_bandgap()),
        "sub-bandgap" => Ok(CarrierConfig::sub_bandgap()),
        path if Path::new(path).exists() => Ok(carrier_config_from_json(&std::fs::read_to_string(path)?)?),
        other => Err(CliError::Config(format!(
            "unknown carrier model '{other}': expected super-bandgap, sub-bandgap or a file path"
        ))),
    }
}

pub fn models_arg(s: &str) -> CliResult<Vec<Model>> {
    s.split(',')
        .map(|k| {
            Model::from_key(k.trim())
                .ok_or_else(|| CliError::Config(format!("unknown model '{k}': expected zurek, howie or scheel")))
        })
        .collect()
}

/// Quadrature tolerance applied to both integral models.
pub fn report_settings(quad_tol: Option<f64>) -> CliResult<ReportSettings> {
    let mut s = ReportSettings::default();
    if let Some(t) = quad_tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Config(format!("--quad-tol must lie in (0, 1), got {t}")));
        }
        s.howie.rel_tol = t;
        s.scheel.rel_tol = t;
    }
    Ok(s)
}

/// `lo:hi:n` with n ≥ 1 points, evenly spaced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

pub fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected lo:hi:n, got '{s}'"));
    }
    let lo: f64 = parts[0].parse().map_err(|_| format!("bad lower bound '{}'", parts[0]))?;
    let hi: f64 = parts[1].parse().map_err(|_| format!("bad upper bound '{}'", parts[1]))?;
    let n: usize = parts[2].parse().map_err(|_| format!("bad point count '{}'", parts[2]))?;
    if n == 0 || !lo.is_finite() || !hi.is_finite() {
        return Err(format!("range '{s}' needs finite bounds and n ≥ 1"));
    }
    Ok(Range { lo, hi, n })
}

/// `name=lo:hi:n`
pub fn parse_sweep(s: &str) -> Result<(String, Range), String> {
    let (name, range) = s.split_once('=').ok_or_else(|| format!("expected param=lo:hi:n, got '{s}'"))?;
    Ok((name.trim().to_string(), parse_range(range)?))
}
