//! Beam deflection by a carrier charge distribution.

use serde::{Deserialize, Serialize};

use super::field::{ChargeLayout, ElectricField, LineSource};
use super::trajectory::{propagate_electron, Outcome, PropagationSettings, TrajectoryState};
use crate::carriers::{
    chopped_response, CarrierConfig, CarrierSystem, ChargeDistribution, ChopPhase, ChopResponse, ChopSettings,
    IlluminationKind, SURFACE_WINDOW,
};
use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};

/// Where the probe beam flies relative to the illuminated stripe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSetup {
    /// Beam height above the surface, m.
    pub beam_height: f64,
    /// Lateral beam position in carrier-mesh coordinates, m.
    pub beam_x: f64,
    /// Electron speed, m/s.
    pub speed: f64,
    /// Length of the charged stripe along the flight, m. The default is the line focus that
    /// spreads 2 mW of 632.8 nm light at 1e22 photons/m²s over a 150 µm wide Gaussian.
    pub stripe_length: f64,
    /// Field-free approach before the stripe and the exit region after it, m.
    pub margin: f64,
    /// Drift from the end of the exit region to the detector, m.
    pub detector_distance: f64,
    /// Largest lateral spacing between the sub-lines a cell is split into, m.
    pub max_subline_spacing: f64,
    /// Largest flight distance per integration step, m.
    pub max_step_length: f64,
}

impl Default for ProbeSetup {
    fn default() -> Self {
        ProbeSetup {
            beam_height: 12e-6,
            beam_x: 0.0,
            speed: 0.01 / 4.1e-10,
            stripe_length: 2.4e-3,
            margin: 2e-3,
            detector_distance: 0.25,
            max_subline_spacing: 2e-6,
            max_step_length: 2e-6,
        }
    }
}

impl ProbeSetup {
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("beam_height", self.beam_height),
            ("speed", self.speed),
            ("stripe_length", self.stripe_length),
            ("max_subline_spacing", self.max_subline_spacing),
            ("max_step_length", self.max_step_length),
        ] {
            crate::error::positive(what, v)?;
        }
        crate::error::non_negative("margin", self.margin)?;
        crate::error::non_negative("detector_distance", self.detector_distance)?;
        Ok(())
    }

    /// The stripe runs over y ∈ [0, stripe_length].
    pub fn layout(&self, charge: &ChargeDistribution) -> ChargeLayout {
        ChargeLayout::from_distribution(charge, 0.0, self.stripe_length, self.max_subline_spacing)
    }

    fn propagation(&self) -> PropagationSettings {
        PropagationSettings {
            y_end: self.stripe_length + self.margin,
            detector_distance: self.detector_distance,
            max_dt: self.max_step_length / self.speed,
            max_steps: 10_000_000,
        }
    }

    fn start(&self, beam_x: f64) -> TrajectoryState {
        TrajectoryState::along_y(beam_x, -self.margin, self.beam_height, self.speed)
    }

    /// Vertical displacement at the detector per unit vertical field acting over the stripe,
    /// for a straight flight: (−e/m)·T·(T/2 + (margin + D)/v) with T = stripe_length/v.
    fn lever(&self) -> f64 {
        let t = self.stripe_length / self.speed;
        -ELEMENTARY_CHARGE / ELECTRON_MASS * t * (0.5 * t + (self.margin + self.detector_distance) / self.speed)
    }
}

/// Vertical deflection at the detector from full trajectory integration (positive = away from
/// the surface). `None` if the electron hits the surface.
pub fn deflection_full(charge: &ChargeDistribution, setup: &ProbeSetup, beam_x: f64) -> Result<Option<f64>> {
    setup.validate()?;
    let layout = setup.layout(charge);
    deflection_full_layout(&layout, setup, beam_x)
}

pub fn deflection_full_layout<F: ElectricField + ?Sized>(layout: &F, setup: &ProbeSetup, beam_x: f64) -> Result<Option<f64>> {
    let p = propagate_electron(&setup.start(beam_x), layout, &setup.propagation())?;
    Ok(match p.outcome {
        Outcome::Detected => Some(p.deflection[1]),
        Outcome::Collision => None,
    })
}

/// Fast estimate: each node is an infinite line, the beam flies straight, and the vertical
/// impulse over the stripe is turned into a displacement at the detector. The result is
/// proportional to the charge below the beam path, weighted by the line-charge kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftEstimator {
    pub setup: ProbeSetup,
    /// Ratio of full propagation to the uncalibrated estimate for a line directly below the beam;
    /// absorbs the finite stripe length and the small curvature of the path.
    pub calibration: f64,
}

impl ShiftEstimator {
    /// Calibrate once against a full trajectory through a single weak line charge.
    pub fn calibrate(setup: &ProbeSetup) -> Result<Self> {
        setup.validate()?;
        let lambda = -1e-13;
        let layout = ChargeLayout {
            lines: vec![LineSource {
                x: 0.0,
                z: 0.0,
                y0: 0.0,
                y1: setup.stripe_length,
                lambda,
            }],
            points: Vec::new(),
        };
        let full = deflection_full_layout(&layout, setup, 0.0)?
            .ok_or_else(|| Error::Config("calibration electron hit the surface".into()))?;
        let raw = setup.lever() * lambda / (2.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY) / setup.beam_height;
        Ok(ShiftEstimator {
            setup: *setup,
            calibration: full / raw,
        })
    }

    pub fn vertical_shift_approx(&self, charge: &ChargeDistribution, beam_x: f64) -> f64 {
        let z = self.setup.beam_height;
        let mut field = 0.0;
        for i in 0..charge.len() {
            let dx = beam_x - charge.nodes[i][0];
            let dz = z + charge.nodes[i][1];
            let hw = 0.5 * charge.cell_width[i];
            // vertical field of a uniform strip; tends to λ·dz/(dx² + dz²) for narrow cells
            let angle = ((dx + hw) / dz).atan() - ((dx - hw) / dz).atan();
            field += charge.line_charge[i] * angle / (2.0 * hw);
        }
        field *= charge.exterior_factor / (2.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY);
        self.calibration * self.setup.lever() * field
    }
}

/// Convenience wrapper with the default probe and the beam at `beam_height`.
pub fn vertical_shift_approx(charge: &ChargeDistribution, beam_height: f64) -> Result<f64> {
    let setup = ProbeSetup {
        beam_height,
        ..ProbeSetup::default()
    };
    Ok(ShiftEstimator::calibrate(&setup)?.vertical_shift_approx(charge, setup.beam_x))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    /// Laser centre relative to the beam, m.
    pub laser_position: f64,
    /// Full-trajectory deflection, m (None on collision or failure).
    pub deflection: Option<f64>,
    pub approx: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeflectionScan {
    pub points: Vec<ScanPoint>,
    pub charge: Option<ChargeDistribution>,
}

/// Which carrier model a scan uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChargeModel {
    Sheet,
    Slab,
}

impl ChargeModel {
    pub fn for_config(config: &CarrierConfig) -> ChargeModel {
        if config.illumination.kind == IlluminationKind::TwoGaussian {
            ChargeModel::Slab
        } else {
            ChargeModel::Sheet
        }
    }
}

/// Steady-state charge for a model, restricted to the surface window for the slab.
pub fn steady_charge(config: &CarrierConfig, model: ChargeModel) -> Result<ChargeDistribution> {
    let system = match model {
        ChargeModel::Sheet => CarrierSystem::sheet(config.rates, config.illumination, &config.solver)?,
        ChargeModel::Slab => CarrierSystem::slab(config.rates, config.illumination, &config.solver)?,
    };
    let state = system.solve_steady(&system.dark_state(), 1.0, &config.solver)?;
    let charge = system.charge(&state);
    Ok(match model {
        ChargeModel::Sheet => charge,
        ChargeModel::Slab => charge.surface_window(SURFACE_WINDOW),
    })
}

/// Deflection versus laser position. The carrier domain moves with the laser (the plate is
/// much wider than the computational window), so the steady state is solved once with the
/// laser at the mesh centre and the beam is placed at −x₀ relative to it.
pub fn deflection_scan(
    config: &CarrierConfig,
    model: ChargeModel,
    laser_positions: &[f64],
    setup: &ProbeSetup,
) -> Result<DeflectionScan> {
    setup.validate()?;
    let centred = CarrierConfig {
        illumination: config.illumination.centered_at(0.0),
        ..*config
    };
    let estimator = ShiftEstimator::calibrate(setup)?;
    let charge = match steady_charge(&centred, model) {
        Ok(c) => c,
        Err(e) => {
            let msg = e.to_string();
            return Ok(DeflectionScan {
                points: laser_positions
                    .iter()
                    .map(|&x| ScanPoint {
                        laser_position: x,
                        deflection: None,
                        approx: None,
                        error: Some(msg.clone()),
                    })
                    .collect(),
                charge: None,
            });
        }
    };
    let layout = setup.layout(&charge);
    let points = laser_positions
        .iter()
        .map(|&x0| {
            let beam_x = setup.beam_x - x0;
            let approx = Some(estimator.vertical_shift_approx(&charge, beam_x));
            match deflection_full_layout(&layout, setup, beam_x) {
                Ok(Some(d)) => ScanPoint {
                    laser_position: x0,
                    deflection: Some(d),
                    approx,
                    error: None,
                },
                Ok(None) => ScanPoint {
                    laser_position: x0,
                    deflection: None,
                    approx,
                    error: Some("collision with the surface".into()),
                },
                Err(e) => ScanPoint {
                    laser_position: x0,
                    deflection: None,
                    approx,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(DeflectionScan {
        points,
        charge: Some(charge),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChopTrace {
    pub frequency: f64,
    /// (time since the recorded window began, deflection proxy, light on)
    pub samples: Vec<(f64, f64, bool)>,
    /// Deflection at the end of the last lit half.
    pub open: f64,
    /// Deflection at the end of the last dark half.
    pub close: f64,
}

impl ChopTrace {
    pub fn amplitude(&self) -> f64 {
        (self.open - self.close).abs()
    }

    /// Fraction of the chop-open deflection still present when the chopper closes.
    pub fn residual_fraction(&self) -> f64 {
        self.close / self.open
    }
}

/// Chopped illumination of the sheet model, read out with the calibrated shift estimate for
/// a beam over the laser centre.
pub fn chop_trace(config: &CarrierConfig, chop: &ChopSettings, setup: &ProbeSetup) -> Result<ChopTrace> {
    let system = CarrierSystem::sheet(config.rates, config.illumination, &config.solver)?;
    let response = chopped_response(&system, chop, &config.solver)?;
    chop_trace_from(&response, setup, config.illumination.center)
}

pub fn chop_trace_from(response: &ChopResponse, setup: &ProbeSetup, beam_x: f64) -> Result<ChopTrace> {
    let estimator = ShiftEstimator::calibrate(setup)?;
    let samples: Vec<(f64, f64, bool)> = response
        .snapshots
        .iter()
        .map(|s| {
            let lit = matches!(s.phase, ChopPhase::Lit | ChopPhase::Open);
            (s.time, estimator.vertical_shift_approx(&s.charge, beam_x), lit)
        })
        .collect();
    let last = |phase: ChopPhase| {
        response
            .snapshots
            .iter()
            .rev()
            .find(|s| s.phase == phase)
            .map(|s| estimator.vertical_shift_approx(&s.charge, beam_x))
            .ok_or_else(|| Error::Config("chopped response has no complete cycle".into()))
    };
    Ok(ChopTrace {
        frequency: response.frequency,
        open: last(ChopPhase::Open)?,
        close: last(ChopPhase::Close)?,
        samples,
    })
}
