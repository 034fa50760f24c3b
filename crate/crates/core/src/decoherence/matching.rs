//! Sensitivity sweeps, monotonicity checks and one-knob matching of a model output to a
//! target value.

use serde::Serialize;

use super::report::{model_report, Model, ReportSettings};
use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// Parameters a model output can be swept over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Knob {
    /// Howie frequency cutoff ω_m, rad/s.
    Cutoff,
    /// Howie lower wave-vector factor α.
    Alpha,
    /// Beam height z, m.
    Height,
    /// Flight length along the wall (time of flight kept consistent), m.
    Length,
    /// Wall temperature, K.
    Temperature,
    /// Wall conductivity 1/ρ, S/m.
    Conductivity,
}

impl Knob {
    pub fn key(self) -> &'static str {
        match self {
            Knob::Cutoff => "cutoff",
            Knob::Alpha => "alpha",
            Knob::Height => "height",
            Knob::Length => "length",
            Knob::Temperature => "temperature",
            Knob::Conductivity => "conductivity",
        }
    }

    pub fn from_key(s: &str) -> Option<Knob> {
        [
            Knob::Cutoff,
            Knob::Alpha,
            Knob::Height,
            Knob::Length,
            Knob::Temperature,
            Knob::Conductivity,
        ]
        .into_iter()
        .find(|k| k.key() == s)
    }

    /// Current value of the knob.
    pub fn value(self, scenario: &Scenario, settings: &ReportSettings) -> f64 {
        match self {
            Knob::Cutoff => settings.howie.cutoff,
            Knob::Alpha => settings.howie.alpha,
            Knob::Height => scenario.geometry.height,
            Knob::Length => scenario.geometry.interaction_length,
            Knob::Temperature => scenario.material.temperature,
            Knob::Conductivity => 1.0 / scenario.material.resistivity,
        }
    }

    /// Copies of the inputs with the knob set to `x`.
    pub fn apply(self, scenario: &Scenario, settings: &ReportSettings, x: f64) -> (Scenario, ReportSettings) {
        let mut s = scenario.clone();
        let mut r = *settings;
        match self {
            Knob::Cutoff => r.howie.cutoff = x,
            Knob::Alpha => r.howie.alpha = x,
            Knob::Height => s.geometry.height = x,
            Knob::Length => {
                s.geometry.interaction_length = x;
                s.geometry.time_of_flight = x / s.beam.speed;
            }
            Knob::Temperature => s.material.temperature = x,
            Knob::Conductivity => s.material.resistivity = 1.0 / x,
        }
        (s, r)
    }
}

/// Decoherence amount of `model` with `knob` set to `x`.
pub fn amount_at(model: Model, scenario: &Scenario, settings: &ReportSettings, knob: Knob, x: f64) -> Result<f64> {
    let (s, r) = knob.apply(scenario, settings, x);
    Ok(model_report(&s, model, &r)?.decoherence_amount)
}

/// Geometric grid of `n` points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityCheck {
    pub model: Model,
    pub knob: Knob,
    pub expected: Trend,
    pub samples: Vec<(f64, f64)>,
    pub holds: bool,
}

/// Evaluate `model` on a geometric grid of the knob and check the expected strict trend.
pub fn monotonicity(
    model: Model,
    scenario: &Scenario,
    settings: &ReportSettings,
    knob: Knob,
    expected: Trend,
    span: (f64, f64),
    n: usize,
) -> Result<MonotonicityCheck> {
    let base = knob.value(scenario, settings);
    let mut samples = Vec::with_capacity(n);
    for x in log_grid(base * span.0, base * span.1, n) {
        samples.push((x, amount_at(model, scenario, settings, knob, x)?));
    }
    let holds = samples.windows(2).all(|w| match expected {
        Trend::Increasing => w[1].1 > w[0].1,
        Trend::Decreasing => w[1].1 < w[0].1,
    });
    Ok(MonotonicityCheck {
        model,
        knob,
        expected,
        samples,
        holds,
    })
}

/// The trends each model is expected to follow. Conductivity is left out: the Drude response
/// makes the quadrature forms non-monotone in σ for metals (only the closed form is ∝ 1/σ).
pub fn expected_trends(model: Model) -> &'static [(Knob, Trend)] {
    match model {
        Model::Howie => &[
            (Knob::Cutoff, Trend::Increasing),
            (Knob::Length, Trend::Increasing),
            (Knob::Temperature, Trend::Increasing),
            (Knob::Height, Trend::Decreasing),
        ],
        Model::ScheelMarkov => &[
            (Knob::Length, Trend::Increasing),
            (Knob::Temperature, Trend::Increasing),
            (Knob::Height, Trend::Decreasing),
        ],
        Model::Zurek => &[
            (Knob::Length, Trend::Increasing),
            (Knob::Temperature, Trend::Increasing),
            (Knob::Height, Trend::Decreasing),
        ],
    }
}

/// All expected trends of `model` over ±`decades` around the scenario's values.
pub fn monotonicity_suite(
    model: Model,
    scenario: &Scenario,
    settings: &ReportSettings,
    decades: f64,
    n: usize,
) -> Result<Vec<MonotonicityCheck>> {
    let f = 10f64.powf(decades);
    expected_trends(model)
        .iter()
        .map(|&(knob, trend)| monotonicity(model, scenario, settings, knob, trend, (1.0 / f, f), n))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterMatch {
    pub model: Model,
    pub knob: Knob,
    pub target: f64,
    /// Knob value that reproduces the target, if the search bracketed it.
    pub parameter: Option<f64>,
    pub value: Option<f64>,
    /// Knob value relative to the scenario's own.
    pub ratio: Option<f64>,
    pub searched: (f64, f64),
}

/// Log-space bisection for a knob value at which the decoherence amount is within
/// `rel_tol` of `target`. The scenario's own value is accepted first if it already matches;
/// otherwise the output must be monotone in the knob over `[lo, hi]`.
pub fn match_parameter(
    model: Model,
    scenario: &Scenario,
    settings: &ReportSettings,
    knob: Knob,
    target: f64,
    (lo, hi): (f64, f64),
    rel_tol: f64,
) -> Result<ParameterMatch> {
    if !(target > 0.0) || !(lo > 0.0) || !(hi > lo) {
        return Err(Error::Config(format!(
            "parameter match needs target > 0 and 0 < lo < hi (got {target:e}, [{lo:e}, {hi:e}])"
        )));
    }
    let base = knob.value(scenario, settings);
    let eval = |x: f64| amount_at(model, scenario, settings, knob, x);
    let miss = |v: f64| (v / target).ln();
    let none = ParameterMatch {
        model,
        knob,
        target,
        parameter: None,
        value: None,
        ratio: None,
        searched: (lo, hi),
    };
    if base >= lo && base <= hi {
        let v = eval(base)?;
        if ((v - target) / target).abs() <= rel_tol {
            return Ok(ParameterMatch {
                parameter: Some(base),
                value: Some(v),
                ratio: Some(1.0),
                ..none
            });
        }
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (eval(a)?, eval(b)?);
    if !(fa > 0.0 && fb > 0.0) || miss(fa) * miss(fb) > 0.0 {
        return Ok(none);
    }
    for _ in 0..200 {
        for (x, v) in [(a, fa), (b, fb)] {
            if ((v - target) / target).abs() <= rel_tol {
                return Ok(ParameterMatch {
                    parameter: Some(x),
                    value: Some(v),
                    ratio: Some(x / base),
                    ..none
                });
            }
        }
        let m = (a * b).sqrt();
        let fm = eval(m)?;
        if miss(fm) * miss(fa) > 0.0 {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    Ok(none)
}
