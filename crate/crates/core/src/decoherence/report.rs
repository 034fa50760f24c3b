//! One report per model for a scenario.

use serde::{Deserialize, Serialize};

use super::corrections::{corrections_for, CorrectionFactors};
use super::howie::{howie_energy_loss, howie_thermal_p, HowieSettings};
use super::scheel::{scheel_gamma, ScheelSettings};
use super::zurek::{boyer_power, zurek_decoherence_amount, zurek_decoherence_time, zurek_energy_loss, zurek_relaxation_time};
use crate::error::Result;
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Zurek,
    Howie,
    ScheelMarkov,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Zurek, Model::Howie, Model::ScheelMarkov];

    pub fn key(self) -> &'static str {
        match self {
            Model::Zurek => "zurek",
            Model::Howie => "howie",
            Model::ScheelMarkov => "scheel",
        }
    }

    pub fn from_key(s: &str) -> Option<Model> {
        match s {
            "zurek" => Some(Model::Zurek),
            "howie" => Some(Model::Howie),
            "scheel" | "scheel_markov" => Some(Model::ScheelMarkov),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecoherenceReport {
    pub model: Model,
    /// eV; absent for the visibility-only model.
    pub energy_loss: Option<f64>,
    pub decoherence_amount: f64,
    /// s
    pub decoherence_time: f64,
    /// s; Zurek only.
    pub relaxation_time: Option<f64>,
    pub corrections: CorrectionFactors,
    /// Set when the predicted loss exceeds the beam's kinetic energy.
    pub unphysical_loss: bool,
    /// Absolute error estimate on `decoherence_amount` from quadrature, when one was used.
    pub quadrature_error: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportSettings {
    #[serde(default)]
    pub howie: HowieSettings,
    #[serde(default)]
    pub scheel: ScheelSettings,
}

fn flight_over(t: f64, rd: f64) -> f64 {
    if rd > 0.0 {
        t / rd
    } else {
        f64::INFINITY
    }
}

pub fn zurek_report(scenario: &Scenario, corrections: &CorrectionFactors) -> Result<DecoherenceReport> {
    let de = zurek_energy_loss(scenario)?;
    let rd = zurek_decoherence_amount(de, scenario, corrections)?;
    let power = boyer_power(scenario.material.resistivity, scenario.beam.speed, scenario.geometry.height)?;
    let relaxation_time = if power > 0.0 {
        Some(zurek_relaxation_time(scenario.beam.speed, power)?)
    } else {
        None
    };
    Ok(DecoherenceReport {
        model: Model::Zurek,
        energy_loss: Some(de),
        decoherence_amount: rd,
        decoherence_time: zurek_decoherence_time(scenario, corrections)?,
        relaxation_time,
        corrections: *corrections,
        unphysical_loss: de > scenario.beam.kinetic_energy_ev(),
        quadrature_error: None,
    })
}

pub fn howie_report(scenario: &Scenario, corrections: &CorrectionFactors, settings: &HowieSettings) -> Result<DecoherenceReport> {
    let p = howie_thermal_p(scenario, settings, corrections.c2)?;
    let de = howie_energy_loss(scenario, settings)?;
    Ok(DecoherenceReport {
        model: Model::Howie,
        energy_loss: Some(de.value),
        decoherence_amount: p.value,
        decoherence_time: flight_over(scenario.geometry.time_of_flight, p.value),
        relaxation_time: None,
        corrections: CorrectionFactors { c1: 1.0, ..*corrections },
        unphysical_loss: de.value > scenario.beam.kinetic_energy_ev(),
        quadrature_error: Some(p.error),
    })
}

pub fn scheel_report(scenario: &Scenario, corrections: &CorrectionFactors, settings: &ScheelSettings) -> Result<DecoherenceReport> {
    let g = scheel_gamma(scenario, scenario.beam.coherence_length, settings, corrections.c2)?;
    Ok(DecoherenceReport {
        model: Model::ScheelMarkov,
        energy_loss: None,
        decoherence_amount: g.value,
        decoherence_time: flight_over(scenario.geometry.time_of_flight, g.value),
        relaxation_time: None,
        corrections: CorrectionFactors { c1: 1.0, ..*corrections },
        unphysical_loss: false,
        quadrature_error: Some(g.error),
    })
}

pub fn model_report(scenario: &Scenario, model: Model, settings: &ReportSettings) -> Result<DecoherenceReport> {
    let corrections = corrections_for(scenario)?;
    match model {
        Model::Zurek => zurek_report(scenario, &corrections),
        Model::Howie => howie_report(scenario, &corrections, &settings.howie),
        Model::ScheelMarkov => scheel_report(scenario, &corrections, &settings.scheel),
    }
}

/// Zurek, Howie and Scheel–Markov reports, in that order.
pub fn full_report(scenario: &Scenario, settings: &ReportSettings) -> Result<[DecoherenceReport; 3]> {
    Ok([
        model_report(scenario, Model::Zurek, settings)?,
        model_report(scenario, Model::Howie, settings)?,
        model_report(scenario, Model::ScheelMarkov, settings)?,
    ])
}
