use clap::{Args, ValueEnum};

use ewall_core::decoherence::{
    amount_at, log_grid, match_parameter, model_report, monotonicity_suite, Knob, Model, ReportSettings, Trend,
};
use ewall_core::reference::{table_values, Quantity};
use ewall_core::{Preset, Scenario};

use super::{models_arg, parse_sweep, report_settings, scenario_arg, write_table, CliError, CliResult, Range, Status};
use crate::output::{Cell, Table};
use crate::OutputArgs;

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value = "gaas_illuminated")]
    pub scenario: String,
    #[arg(long, default_value = "zurek,howie,scheel")]
    pub models: String,
    /// param=lo:hi:n with param one of cutoff, alpha, height, length, temperature,
    /// conductivity; repeat for a grid over several parameters.
    #[arg(long = "sweep", value_parser = parse_sweep, required = true, allow_hyphen_values = true)]
    pub sweeps: Vec<(String, Range)>,
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn knob_arg(name: &str) -> CliResult<Knob> {
    Knob::from_key(name).ok_or_else(|| {
        CliError::Config(format!(
            "unknown sweep parameter '{name}': expected cutoff, alpha, height, length, temperature or conductivity"
        ))
    })
}

/// Every combination of the axes, first axis slowest.
fn grid(axes: &[(Knob, Vec<f64>)]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, (_, values)| {
        acc.iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

pub fn sweep(a: &SweepArgs) -> CliResult<Status> {
    let scenario = scenario_arg(&a.scenario)?;
    let models = models_arg(&a.models)?;
    let settings = report_settings(a.quad_tol)?;
    let mut axes = Vec::new();
    for (name, range) in &a.sweeps {
        let knob = knob_arg(name)?;
        if axes.iter().any(|(k, _)| *k == knob) {
            return Err(CliError::Config(format!("parameter '{name}' swept twice")));
        }
        axes.push((knob, range.values()));
    }
    let mut columns: Vec<&str> = axes.iter().map(|(k, _)| k.key()).collect();
    columns.extend(["model", "energy_loss_ev", "decoherence_amount", "error"]);
    let mut t = Table::new(&columns);
    for point in grid(&axes) {
        let (mut s, mut r) = (scenario.clone(), settings);
        for ((knob, _), &x) in axes.iter().zip(&point) {
            (s, r) = knob.apply(&s, &r, x);
        }
        for &m in &models {
            let mut row: Vec<Cell> = point.iter().map(|&x| x.into()).collect();
            match s.validate().and_then(|_| model_report(&s, m, &r)) {
                Ok(rep) => row.extend([m.key().into(), rep.energy_loss.into(), rep.decoherence_amount.into(), Cell::Empty]),
                Err(e) => {
                    eprintln!("{} at {:?}: {e}", m.key(), point);
                    row.extend([m.key().into(), Cell::Empty, Cell::Empty, e.to_string().into()]);
                }
            }
            t.push(row);
        }
    }
    write_table(&t, "sweep", &a.output)?;
    Ok(Status::Ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SensitivityMode {
    /// Howie amount over cutoff × wave-vector factor.
    Grid,
    /// Knob value reproducing each published Howie and Scheel amount.
    Matches,
    /// Expected monotone trends of each model.
    Monotonicity,
}

#[derive(Debug, Clone, Args)]
pub struct SensitivityArgs {
    #[arg(long, value_enum, default_value_t = SensitivityMode::Grid)]
    pub mode: SensitivityMode,
    /// Preset key or scenario file; all presets when omitted.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Cutoff multiples of the default, lo:hi:n (geometric spacing).
    #[arg(long, value_parser = super::parse_range, default_value = "0.1:10:9")]
    pub cutoff_factors: Range,
    #[arg(long, value_delimiter = ',', default_value = "0.0625,0.125,0.25,0.5")]
    pub alphas: Vec<f64>,
    /// Relative tolerance of a match.
    #[arg(long, default_value_t = 0.1)]
    pub tol: f64,
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn scenarios(arg: &Option<String>) -> CliResult<Vec<(String, Scenario)>> {
    match arg {
        Some(s) => {
            let sc = scenario_arg(s)?;
            Ok(vec![(sc.label.clone(), sc)])
        }
        None => Ok(Preset::ALL.iter().map(|p| (p.key().to_string(), p.scenario())).collect()),
    }
}

pub fn sensitivity(a: &SensitivityArgs) -> CliResult<Status> {
    let settings = report_settings(a.quad_tol)?;
    let t = match a.mode {
        SensitivityMode::Grid => howie_grid(a, &settings)?,
        SensitivityMode::Matches => matches(a, &settings)?,
        SensitivityMode::Monotonicity => trends(a, &settings)?,
    };
    write_table(&t, "sensitivity", &a.output)?;
    Ok(Status::Ok)
}

fn howie_grid(a: &SensitivityArgs, settings: &ReportSettings) -> CliResult<Table> {
    let f = a.cutoff_factors;
    if !(f.lo > 0.0 && f.hi >= f.lo) {
        return Err(CliError::Config("--cutoff-factors needs 0 < lo <= hi".into()));
    }
    if a.alphas.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return Err(CliError::Config("--alphas must lie in (0, 1)".into()));
    }
    let base = settings.howie.cutoff;
    let mut t = Table::new(&["scenario", "cutoff_factor", "cutoff_rad_s", "alpha", "decoherence_amount", "error"]);
    for (name, s) in scenarios(&a.scenario)? {
        for factor in log_grid(f.lo, f.hi, f.n) {
            for &alpha in &a.alphas {
                let (_, r) = Knob::Alpha.apply(&s, settings, alpha);
                let cutoff = base * factor;
                let row_head: Vec<Cell> = vec![name.as_str().into(), factor.into(), cutoff.into(), alpha.into()];
                let mut row = row_head;
                match amount_at(Model::Howie, &s, &r, Knob::Cutoff, cutoff) {
                    Ok(p) => row.extend([p.into(), Cell::Empty]),
                    Err(e) => {
                        eprintln!("{name} cutoff ×{factor} alpha {alpha}: {e}");
                        row.extend([Cell::Empty, e.to_string().into()]);
                    }
                }
                t.push(row);
            }
        }
    }
    Ok(t)
}

/// Knobs searched for each model, each over multiples of its default.
fn match_knobs(model: Model) -> &'static [(Knob, (f64, f64))] {
    match model {
        Model::Howie => &[(Knob::Cutoff, (1e-3, 1e3)), (Knob::Alpha, (0.1, 7.9))],
        Model::ScheelMarkov => &[(Knob::Height, (1e-3, 1e3))],
        Model::Zurek => &[],
    }
}

fn matches(a: &SensitivityArgs, settings: &ReportSettings) -> CliResult<Table> {
    if !(a.tol > 0.0) {
        return Err(CliError::Config("--tol must be positive".into()));
    }
    let mut t = Table::new(&[
        "preset", "model", "knob", "target", "default_value", "computed_at_default", "matched_parameter", "ratio",
        "matched_value",
    ]);
    let wanted = a.scenario.as_deref();
    for r in table_values(1) {
        let Some(model) = r.model else { continue };
        if r.quantity != Quantity::DecoherenceAmount || wanted.is_some_and(|w| w != r.preset) {
            continue;
        }
        let s = r.preset()?.scenario();
        let at_default = model_report(&s, model, settings)?.decoherence_amount;
        for &(knob, (lo, hi)) in match_knobs(model) {
            let base = knob.value(&s, settings);
            let m = match_parameter(model, &s, settings, knob, r.value, (base * lo, base * hi), a.tol)?;
            t.push(vec![
                r.preset.as_str().into(),
                model.key().into(),
                knob.key().into(),
                r.value.into(),
                base.into(),
                at_default.into(),
                m.parameter.into(),
                m.ratio.into(),
                m.value.into(),
            ]);
        }
    }
    Ok(t)
}

fn trends(a: &SensitivityArgs, settings: &ReportSettings) -> CliResult<Table> {
    let mut t = Table::new(&["scenario", "model", "knob", "expected", "holds", "samples"]);
    for (name, s) in scenarios(&a.scenario)? {
        for model in [Model::Zurek, Model::Howie, Model::ScheelMarkov] {
            for c in monotonicity_suite(model, &s, settings, 1.0, 7)? {
                let samples: Vec<String> = c.samples.iter().map(|(x, y)| format!("{x:e}:{y:e}")).collect();
                t.push(vec![
                    name.as_str().into(),
                    model.key().into(),
                    c.knob.key().into(),
                    match c.expected {
                        Trend::Increasing => "increasing",
                        Trend::Decreasing => "decreasing",
                    }
                    .into(),
                    c.holds.into(),
                    samples.join(" ").into(),
                ]);
            }
        }
    }
    Ok(t)
}
