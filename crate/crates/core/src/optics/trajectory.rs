//! Classical electron trajectories (non-relativistic Newton, kick-drift-kick leapfrog).

use serde::{Deserialize, Serialize};

use super::field::ElectricField;
use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE};
use crate::error::{Error, Result};

/// Charge-to-mass ratio of the electron including sign, C/kg.
const Q_OVER_M: f64 = -ELEMENTARY_CHARGE / ELECTRON_MASS;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryState {
    /// m
    pub position: [f64; 3],
    /// m/s
    pub velocity: [f64; 3],
    /// s
    pub time: f64,
}

impl TrajectoryState {
    /// An electron at (x, y, z) flying along +y.
    pub fn along_y(x: f64, y: f64, z: f64, speed: f64) -> Self {
        TrajectoryState {
            position: [x, y, z],
            velocity: [0.0, speed, 0.0],
            time: 0.0,
        }
    }

    pub fn kinetic_energy(&self) -> f64 {
        let v = self.velocity;
        0.5 * ELECTRON_MASS * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    }

    /// Kinetic plus electrostatic potential energy, J.
    pub fn total_energy<F: ElectricField + ?Sized>(&self, field: &F) -> f64 {
        self.kinetic_energy() - ELEMENTARY_CHARGE * field.potential(self.position)
    }

    pub fn reversed(&self) -> Self {
        TrajectoryState {
            velocity: [-self.velocity[0], -self.velocity[1], -self.velocity[2]],
            ..*self
        }
    }
}

/// One leapfrog step of length `dt`.
pub fn leapfrog_step<F: ElectricField + ?Sized>(s: &TrajectoryState, field: &F, dt: f64) -> TrajectoryState {
    let e0 = field.field(s.position);
    let mut v = s.velocity;
    for k in 0..3 {
        v[k] += 0.5 * dt * Q_OVER_M * e0[k];
    }
    let mut x = s.position;
    for k in 0..3 {
        x[k] += dt * v[k];
    }
    let e1 = field.field(x);
    for k in 0..3 {
        v[k] += 0.5 * dt * Q_OVER_M * e1[k];
    }
    TrajectoryState {
        position: x,
        velocity: v,
        time: s.time + dt,
    }
}

/// `steps` leapfrog steps of length `dt`.
pub fn leapfrog<F: ElectricField + ?Sized>(s: &TrajectoryState, field: &F, dt: f64, steps: usize) -> TrajectoryState {
    let mut s = *s;
    for _ in 0..steps {
        s = leapfrog_step(&s, field, dt);
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationSettings {
    /// Integration stops when the electron reaches this y, m.
    pub y_end: f64,
    /// Field-free drift from `y_end` to the detector plane, m.
    pub detector_distance: f64,
    /// Largest step, s.
    pub max_dt: f64,
    /// Safety limit on the number of steps.
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Detected,
    /// The electron reached the surface z = 0.
    Collision,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Propagation {
    pub outcome: Outcome,
    /// State at y_end (or at the collision).
    pub exit: TrajectoryState,
    /// Offset at the detector from the undeflected straight line, (x, z), m.
    pub deflection: [f64; 2],
    pub steps: usize,
}

/// Integrate through the field to `y_end`, then drift ballistically to the detector.
pub fn propagate_electron<F: ElectricField + ?Sized>(
    initial: &TrajectoryState,
    field: &F,
    settings: &PropagationSettings,
) -> Result<Propagation> {
    if !(initial.velocity[1] > 0.0) {
        return Err(Error::domain("velocity_y", initial.velocity[1], "electron must move towards +y"));
    }
    if !(initial.position[1] < settings.y_end) {
        return Err(Error::domain("y", initial.position[1], "start must lie before the end plane"));
    }
    if !(settings.max_dt > 0.0) {
        return Err(Error::domain("max_dt", settings.max_dt, "must be positive"));
    }
    let mut s = *initial;
    let mut steps = 0;
    let tol = 1e-12 * (settings.y_end - initial.position[1]);
    while settings.y_end - s.position[1] > tol {
        if steps >= settings.max_steps || s.velocity[1] <= 0.0 {
            return Err(Error::NonConvergence {
                steps,
                residuals: vec![settings.y_end - s.position[1]],
            });
        }
        let remaining = (settings.y_end - s.position[1]) / s.velocity[1];
        s = leapfrog_step(&s, field, remaining.min(settings.max_dt));
        steps += 1;
        if s.position[2] <= 0.0 {
            return Ok(Propagation {
                outcome: Outcome::Collision,
                exit: s,
                deflection: [f64::NAN, f64::NAN],
                steps,
            });
        }
    }
    // land exactly on the end plane
    s.position[1] = settings.y_end;
    let t_det = settings.detector_distance / s.velocity[1];
    let at_detector = [s.position[0] + s.velocity[0] * t_det, s.position[2] + s.velocity[2] * t_det];
    let span = settings.y_end + settings.detector_distance - initial.position[1];
    let t_free = span / initial.velocity[1];
    let straight = [
        initial.position[0] + initial.velocity[0] * t_free,
        initial.position[2] + initial.velocity[2] * t_free,
    ];
    Ok(Propagation {
        outcome: Outcome::Detected,
        exit: s,
        deflection: [at_detector[0] - straight[0], at_detector[1] - straight[1]],
        steps,
    })
}
