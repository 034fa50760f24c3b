use clap::Args;

use ewall_core::decoherence::Model;
use ewall_core::reference::{compare_table1, compare_table2, Comparison, Gate, Quantity};

use super::{models_arg, report_settings, write_table, CliError, CliResult, Status};
use crate::output::Table;
use crate::OutputArgs;

#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    /// Comma-separated subset of zurek, howie, scheel.
    #[arg(long, default_value = "zurek,howie,scheel")]
    pub models: String,
    /// Replace the relative tolerance of relatively gated entries.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Relative tolerance of the adaptive quadratures.
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Table2Args {
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn quantity_key(q: Quantity) -> &'static str {
    match q {
        Quantity::EnergyLossEv => "energy_loss_ev",
        Quantity::DecoherenceAmount => "decoherence_amount",
        Quantity::C1 => "c1",
        Quantity::C2 => "c2",
    }
}

fn gate_text(g: &Gate) -> String {
    match g {
        Gate::Relative { tolerance } => format!("within {}%", tolerance * 100.0),
        Gate::Factor { factor } => format!("within factor {factor}"),
        Gate::Ungated => "reported".into(),
    }
}

/// Two significant figures, the precision of the published tables.
fn two_figures(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.1e}")
    } else {
        v.to_string()
    }
}

fn comparison_table(rows: &[Comparison]) -> Table {
    let mut t = Table::new(&[
        "id",
        "preset",
        "model",
        "quantity",
        "reference",
        "computed",
        "computed_2sf",
        "relative_deviation",
        "gate",
        "pass",
        "note",
    ]);
    for c in rows {
        let r = &c.reference;
        t.push(vec![
            r.id.as_str().into(),
            r.preset.as_str().into(),
            r.model.map_or("", Model::key).into(),
            quantity_key(r.quantity).into(),
            r.value.into(),
            c.computed.into(),
            two_figures(c.computed).into(),
            c.relative_deviation.into(),
            gate_text(&r.gate).into(),
            c.pass.into(),
            r.note.clone().into(),
        ]);
    }
    t
}

fn status(rows: &[Comparison]) -> Status {
    let failed: Vec<&str> = rows
        .iter()
        .filter(|c| c.pass == Some(false))
        .map(|c| c.reference.id.as_str())
        .collect();
    if failed.is_empty() {
        Status::Ok
    } else {
        eprintln!("{} gated value(s) outside tolerance: {}", failed.len(), failed.join(", "));
        Status::Mismatch
    }
}

fn check_tol(tol: Option<f64>) -> CliResult<()> {
    match tol {
        Some(t) if !(t > 0.0) => Err(CliError::Config(format!("--tol must be positive, got {t}"))),
        _ => Ok(()),
    }
}

pub fn table1(a: &Table1Args) -> CliResult<Status> {
    check_tol(a.tol)?;
    let settings = report_settings(a.quad_tol)?;
    let rows = compare_table1(&settings, a.tol, &models_arg(&a.models)?)?;
    write_table(&comparison_table(&rows), "table1", &a.output)?;
    Ok(status(&rows))
}

pub fn table2(a: &Table2Args) -> CliResult<Status> {
    check_tol(a.tol)?;
    let rows = compare_table2(a.tol)?;
    write_table(&comparison_table(&rows), "table2", &a.output)?;
    Ok(status(&rows))
}
