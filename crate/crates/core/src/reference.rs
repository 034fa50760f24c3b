//! Published reference values, read from a bundled data file, and their comparison with
//! computed values.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::decoherence::corrections::computed_corrections;
use crate::decoherence::{full_report, Model, ReportSettings};
use crate::error::{Error, Result};
use crate::scenario::{CorrectionSource, Preset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    EnergyLossEv,
    DecoherenceAmount,
    C1,
    C2,
}

/// How far a computed value may sit from its reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    /// |computed/reference − 1| ≤ tolerance.
    Relative { tolerance: f64 },
    /// reference/factor ≤ computed ≤ reference·factor.
    Factor { factor: f64 },
    /// Reported, never judged.
    Ungated,
}

impl Gate {
    pub fn check(&self, computed: f64, reference: f64) -> Option<bool> {
        match *self {
            Gate::Relative { tolerance } => Some(((computed - reference) / reference).abs() <= tolerance),
            Gate::Factor { factor } => {
                let r = computed / reference;
                Some(r >= 1.0 / factor && r <= factor)
            }
            Gate::Ungated => None,
        }
    }

    /// Same gate with a relative tolerance replaced (factor gates are left alone).
    pub fn with_tolerance(self, tolerance: Option<f64>) -> Gate {
        match (self, tolerance) {
            (Gate::Relative { .. }, Some(t)) => Gate::Relative { tolerance: t },
            (g, _) => g,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceValue {
    pub id: String,
    pub table: u8,
    #[serde(default)]
    pub model: Option<Model>,
    pub quantity: Quantity,
    pub preset: String,
    pub value: f64,
    pub gate: Gate,
    #[serde(default)]
    pub note: Option<String>,
}

impl ReferenceValue {
    pub fn preset(&self) -> Result<Preset> {
        Preset::from_key(&self.preset).ok_or_else(|| Error::Config(format!("unknown preset {}", self.preset)))
    }
}

#[derive(Deserialize)]
struct ReferenceFile {
    entries: Vec<ReferenceValue>,
}

/// Every bundled reference value, in file order.
pub fn reference_values() -> &'static [ReferenceValue] {
    static VALUES: OnceLock<Vec<ReferenceValue>> = OnceLock::new();
    VALUES.get_or_init(|| {
        let file: ReferenceFile = serde_json::from_str(include_str!("../data/reference_values.json"))
            .expect("bundled reference values are valid");
        file.entries
    })
}

pub fn table_values(table: u8) -> Vec<&'static ReferenceValue> {
    reference_values().iter().filter(|r| r.table == table).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub reference: ReferenceValue,
    pub computed: f64,
    /// computed/reference − 1
    pub relative_deviation: f64,
    /// None for ungated entries.
    pub pass: Option<bool>,
}

impl Comparison {
    fn new(reference: &ReferenceValue, computed: f64, tolerance: Option<f64>) -> Comparison {
        let gate = reference.gate.with_tolerance(tolerance);
        Comparison {
            reference: ReferenceValue {
                gate,
                ..reference.clone()
            },
            computed,
            relative_deviation: computed / reference.value - 1.0,
            pass: gate.check(computed, reference.value),
        }
    }
}

/// Decoherence-model values for every preset against the first table. `tolerance`
/// replaces the relative tolerance of relative gates when given.
pub fn compare_table1(settings: &ReportSettings, tolerance: Option<f64>, models: &[Model]) -> Result<Vec<Comparison>> {
    let mut out = Vec::new();
    for preset in Preset::ALL {
        let entries: Vec<_> = table_values(1)
            .into_iter()
            .filter(|r| r.preset == preset.key() && r.model.is_some_and(|m| models.contains(&m)))
            .collect();
        if entries.is_empty() {
            continue;
        }
        let reports = full_report(&preset.scenario(), settings)?;
        for r in entries {
            let report = reports
                .iter()
                .find(|x| Some(x.model) == r.model)
                .expect("full report covers every model");
            let computed = match r.quantity {
                Quantity::EnergyLossEv => report.energy_loss.unwrap_or(f64::NAN),
                Quantity::DecoherenceAmount => report.decoherence_amount,
                Quantity::C1 | Quantity::C2 => {
                    return Err(Error::Config(format!("{}: correction entry in the model table", r.id)))
                }
            };
            out.push(Comparison::new(r, computed, tolerance));
        }
    }
    Ok(out)
}

/// Correction factors computed from geometry against the second table.
pub fn compare_table2(tolerance: Option<f64>) -> Result<Vec<Comparison>> {
    table_values(2)
        .into_iter()
        .map(|r| {
            let scenario = r.preset()?.scenario();
            let waist = match scenario.corrections {
                CorrectionSource::Tabulated { waist, .. } | CorrectionSource::Computed { waist } => waist,
            };
            let c = computed_corrections(&scenario, waist)?;
            let computed = match r.quantity {
                Quantity::C1 => c.c1,
                Quantity::C2 => c.c2,
                _ => return Err(Error::Config(format!("{}: model entry in the correction table", r.id))),
            };
            Ok(Comparison::new(r, computed, tolerance))
        })
        .collect()
}
