use clap::Args;

use ewall_core::carriers::{CarrierConfig, ChopSettings};
use ewall_core::optics::{chop_trace, deflection_scan, ChargeModel, ProbeSetup};

use super::{carrier_arg, parse_range, write_table, CliError, CliResult, Range, Status};
use crate::output::Table;
use crate::OutputArgs;

#[derive(Debug, Clone, Args)]
pub struct CarrierArgs {
    /// super-bandgap, sub-bandgap, or a carrier file.
    #[arg(long, default_value = "super-bandgap")]
    pub carriers: String,
    /// Override the lateral node count of the carrier grid.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Probe height above the surface, m.
    #[arg(long)]
    pub beam_height: Option<f64>,
}

impl CarrierArgs {
    fn config(&self) -> CliResult<CarrierConfig> {
        let mut c = carrier_arg(&self.carriers)?;
        if let Some(n) = self.nodes {
            c.solver.nodes = n;
        }
        c.validate()?;
        Ok(c)
    }

    fn probe(&self) -> ProbeSetup {
        let mut p = ProbeSetup::default();
        if let Some(h) = self.beam_height {
            p.beam_height = h;
        }
        p
    }
}

#[derive(Debug, Clone, Args)]
pub struct DeflectArgs {
    #[command(flatten)]
    pub carrier: CarrierArgs,
    /// Laser positions relative to the beam, lo:hi:n in m.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "-4e-4:4e-4:17")]
    pub positions: Range,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn deflect(a: &DeflectArgs) -> CliResult<Status> {
    let config = a.carrier.config()?;
    let probe = a.carrier.probe();
    let scan = deflection_scan(&config, ChargeModel::for_config(&config), &a.positions.values(), &probe)?;
    let mut t = Table::new(&["laser_position_m", "deflection_m", "approx_m", "error"]);
    for p in &scan.points {
        t.push(vec![p.laser_position.into(), p.deflection.into(), p.approx.into(), p.error.clone().into()]);
    }
    write_table(&t, "deflect", &a.output)?;
    Ok(Status::Ok)
}

#[derive(Debug, Clone, Args)]
pub struct ChopArgs {
    #[command(flatten)]
    pub carrier: CarrierArgs,
    /// Chopper frequency in Hz; repeat for several.
    #[arg(long = "frequency", default_values_t = [4.0, 8.0, 12.0, 20.0])]
    pub frequencies: Vec<f64>,
    /// Recorded periods once the response is periodic.
    #[arg(long, default_value_t = 2)]
    pub cycles: usize,
    /// One row per frequency instead of the time series.
    #[arg(long)]
    pub summary: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn chop(a: &ChopArgs) -> CliResult<Status> {
    let config = a.carrier.config()?;
    let probe = a.carrier.probe();
    if a.cycles == 0 {
        return Err(CliError::Config("--cycles must be at least 1".into()));
    }
    let mut t = if a.summary {
        Table::new(&["frequency_hz", "open_m", "close_m", "amplitude_m", "residual_fraction"])
    } else {
        Table::new(&["frequency_hz", "time_s", "deflection_proxy_m", "light"])
    };
    for &f in &a.frequencies {
        if !(f > 0.0 && f.is_finite()) {
            return Err(CliError::Config(format!("chop frequency must be positive, got {f}")));
        }
        let settings = ChopSettings {
            cycles: a.cycles,
            ..ChopSettings::new(f)
        };
        let trace = chop_trace(&config, &settings, &probe)?;
        if a.summary {
            t.push(vec![
                f.into(),
                trace.open.into(),
                trace.close.into(),
                trace.amplitude().into(),
                trace.residual_fraction().into(),
            ]);
        } else {
            for &(time, d, lit) in &trace.samples {
                t.push(vec![f.into(), time.into(), d.into(), lit.into()]);
            }
        }
    }
    write_table(&t, "chop", &a.output)?;
    Ok(Status::Ok)
}
