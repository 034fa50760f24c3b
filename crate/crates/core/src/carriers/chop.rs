//! Square-wave (chopped) illumination.

use serde::Serialize;

use super::params::SolverSettings;
use super::solver::CarrierSystem;
use super::state::ChargeDistribution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChopSettings {
    /// Hz; the light is on for the first half of each period.
    pub frequency: f64,
    /// Recorded periods after the periodic state is reached.
    pub cycles: usize,
    /// Samples per half period in addition to the transitions.
    pub samples_per_half: usize,
    pub max_warmup_cycles: usize,
    /// Relative L1 change between successive cycles that counts as periodic.
    pub periodic_tol: f64,
}

impl ChopSettings {
    pub fn new(frequency: f64) -> Self {
        ChopSettings {
            frequency,
            cycles: 2,
            samples_per_half: 4,
            max_warmup_cycles: 400,
            periodic_tol: 1e-4,
        }
    }
}

/// Where in the chop cycle a snapshot was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChopPhase {
    /// End of the light-on half, just before the chopper closes.
    Open,
    /// End of the dark half, just before the chopper opens.
    Close,
    Lit,
    Dark,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChopSnapshot {
    /// Seconds since the start of the recorded window.
    pub time: f64,
    pub phase: ChopPhase,
    pub charge: ChargeDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChopResponse {
    pub frequency: f64,
    pub warmup_cycles: usize,
    pub snapshots: Vec<ChopSnapshot>,
}

impl ChopResponse {
    pub fn transitions(&self, phase: ChopPhase) -> impl Iterator<Item = &ChopSnapshot> {
        self.snapshots.iter().filter(move |s| s.phase == phase)
    }
}

fn l1(a: &ChargeDistribution, b: &ChargeDistribution) -> f64 {
    a.line_charge.iter().zip(&b.line_charge).map(|(x, y)| (x - y).abs()).sum()
}

/// Drive the system with a square wave until the response repeats, then record it.
pub fn chopped_response(system: &CarrierSystem, chop: &ChopSettings, settings: &SolverSettings) -> Result<ChopResponse> {
    if !(1.0..=1000.0).contains(&chop.frequency) {
        return Err(Error::domain("frequency", chop.frequency, "chopping frequency must lie in [1, 1000] Hz"));
    }
    let half = 0.5 / chop.frequency;
    let max_dt = half / (4 * chop.samples_per_half.max(1)) as f64;
    let dark = system.dark_state();
    let mut state = system.solve_steady(&dark, 0.5, settings)?;
    state.time = 0.0;

    let mut previous: Option<ChargeDistribution> = None;
    let mut warmup = 0;
    while warmup < chop.max_warmup_cycles {
        state = system.evolve(&state, half, 1.0, max_dt, settings)?;
        state = system.evolve(&state, half, 0.0, max_dt, settings)?;
        warmup += 1;
        let now = system.charge(&state);
        if let Some(prev) = &previous {
            let scale = now.total_magnitude().max(f64::MIN_POSITIVE);
            if l1(prev, &now) / scale < chop.periodic_tol {
                break;
            }
        }
        previous = Some(now);
    }

    let start = state.time;
    let mut snapshots = Vec::new();
    let step = half / chop.samples_per_half.max(1) as f64;
    for _ in 0..chop.cycles {
        for (light, interior, end) in [(1.0, ChopPhase::Lit, ChopPhase::Open), (0.0, ChopPhase::Dark, ChopPhase::Close)] {
            for k in 0..chop.samples_per_half.max(1) {
                state = system.evolve(&state, step, light, max_dt, settings)?;
                let last = k + 1 == chop.samples_per_half.max(1);
                snapshots.push(ChopSnapshot {
                    time: state.time - start,
                    phase: if last { end } else { interior },
                    charge: system.charge(&state),
                });
            }
        }
    }
    Ok(ChopResponse {
        frequency: chop.frequency,
        warmup_cycles: warmup,
        snapshots,
    })
}
