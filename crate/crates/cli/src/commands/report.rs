use clap::Args;

use ewall_core::decoherence::model_report;
use ewall_core::Preset;

use super::{models_arg, report_settings, scenario_arg, write_table, CliResult, Status};
use crate::output::Table;
use crate::OutputArgs;

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Preset key or scenario file; all presets when omitted.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long, default_value = "zurek,howie,scheel")]
    pub models: String,
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn run(a: &ReportArgs) -> CliResult<Status> {
    let scenarios = match &a.scenario {
        Some(s) => vec![scenario_arg(s)?],
        None => Preset::ALL.iter().map(|p| p.scenario()).collect(),
    };
    let models = models_arg(&a.models)?;
    let settings = report_settings(a.quad_tol)?;
    let mut t = Table::new(&[
        "scenario",
        "model",
        "energy_loss_ev",
        "decoherence_amount",
        "decoherence_time_s",
        "relaxation_time_s",
        "c1",
        "c2",
        "unphysical_loss",
        "quadrature_error",
    ]);
    for s in &scenarios {
        for &m in &models {
            let r = model_report(s, m, &settings)?;
            t.push(vec![
                s.label.as_str().into(),
                m.key().into(),
                r.energy_loss.into(),
                r.decoherence_amount.into(),
                r.decoherence_time.into(),
                r.relaxation_time.into(),
                r.corrections.c1.into(),
                r.corrections.c2.into(),
                r.unphysical_loss.into(),
                r.quadrature_error.into(),
            ]);
        }
    }
    write_table(&t, "report", &a.output)?;
    Ok(Status::Ok)
}
