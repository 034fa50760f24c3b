//! Overlap corrections for which-way information carried by the wall.

use serde::Serialize;

use crate::error::{positive, Result};
use crate::scenario::{CorrectionSource, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrectionFactors {
    pub c1: f64,
    pub c2: f64,
    /// Width of one path above the surface, used for c2.
    pub beam_width_w: f64,
    pub waist_w0: f64,
}

impl CorrectionFactors {
    pub const NONE: CorrectionFactors = CorrectionFactors {
        c1: 1.0,
        c2: 1.0,
        beam_width_w: 0.0,
        waist_w0: 0.0,
    };

    pub fn product(&self) -> f64 {
        self.c1 * self.c2
    }
}

/// Image patches of the two paths overlap when Δx < z: min(1, (Δx/z)²).
pub fn correction_c1(dx: f64, z: f64) -> Result<f64> {
    positive("coherence_length", dx)?;
    positive("height", z)?;
    Ok((dx / z).powi(2).min(1.0))
}

/// Gaussian-beam radius after `length` from a waist `w0`.
pub fn gaussian_beam_width(w0: f64, length: f64, wavelength: f64) -> Result<f64> {
    positive("waist", w0)?;
    crate::error::non_negative("length", length)?;
    positive("wavelength", wavelength)?;
    let rayleigh = length * wavelength / (std::f64::consts::PI * w0 * w0);
    Ok(w0 * (1.0 + rayleigh * rayleigh).sqrt())
}

/// Paths wider than Δx overlap: min(1, (Δx/w)²).
pub fn correction_c2(dx: f64, w: f64) -> Result<f64> {
    positive("coherence_length", dx)?;
    positive("width", w)?;
    Ok((dx / w).powi(2).min(1.0))
}

/// Corrections evaluated from the geometry alone, ignoring any tabulated values.
pub fn computed_corrections(scenario: &Scenario, waist: f64) -> Result<CorrectionFactors> {
    let dx = scenario.beam.coherence_length;
    let w = gaussian_beam_width(
        waist,
        scenario.geometry.grating_to_wall_distance,
        scenario.beam.de_broglie_wavelength(),
    )?;
    Ok(CorrectionFactors {
        c1: correction_c1(dx, scenario.geometry.height)?,
        c2: correction_c2(dx, w)?,
        beam_width_w: w,
        waist_w0: waist,
    })
}

/// Corrections a scenario asks for: its tabulated pair if present, otherwise computed.
pub fn corrections_for(scenario: &Scenario) -> Result<CorrectionFactors> {
    match scenario.corrections {
        CorrectionSource::Tabulated { c1, c2, waist } => {
            let computed = computed_corrections(scenario, waist)?;
            Ok(CorrectionFactors {
                c1,
                c2,
                beam_width_w: computed.beam_width_w,
                waist_w0: waist,
            })
        }
        CorrectionSource::Computed { waist } => computed_corrections(scenario, waist),
    }
}
