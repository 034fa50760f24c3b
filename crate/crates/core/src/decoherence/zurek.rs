//! Ohmic image-charge dissipation and the Caldeira–Leggett decoherence estimate.

use std::f64::consts::PI;

use super::corrections::CorrectionFactors;
use crate::constants::{BOLTZMANN, ELECTRON_MASS, ELEMENTARY_CHARGE, PLANCK_H};
use crate::error::{non_negative, positive, Error, Result};
use crate::scenario::{thermal_wavelength, Scenario};
use crate::units::joule_to_ev;

/// Power dissipated in a resistive wall by the image current of a charge at height `z`.
pub fn boyer_power(resistivity: f64, speed: f64, z: f64) -> Result<f64> {
    non_negative("resistivity", resistivity)?;
    positive("speed", speed)?;
    if !(z > 0.0) {
        return Err(Error::domain("height", z, "image-charge power diverges at the surface"));
    }
    Ok(ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * resistivity * speed * speed / (16.0 * PI * z.powi(3)))
}

/// Energy lost over the flight at constant height, in eV.
pub fn zurek_energy_loss(scenario: &Scenario) -> Result<f64> {
    zurek_energy_loss_with_height(scenario, scenario.geometry.height)
}

/// As [`zurek_energy_loss`] but with an effective height, e.g. one recovered from a
/// bounce-averaged ⟨z⁻³⟩.
pub fn zurek_energy_loss_with_height(scenario: &Scenario, z: f64) -> Result<f64> {
    let p = boyer_power(scenario.material.resistivity, scenario.beam.speed, z)?;
    Ok(joule_to_ev(p * scenario.geometry.time_of_flight))
}

/// Time for the dissipation to drain the kinetic energy scale m v².
pub fn zurek_relaxation_time(speed: f64, power: f64) -> Result<f64> {
    positive("power", power)?;
    positive("speed", speed)?;
    Ok(ELECTRON_MASS * speed * speed / power)
}

/// τ_dec = [4h²/(π e² k_B T ρ)]·[z³/Δx²]/(C1·C2). Infinite for an ideal conductor.
pub fn zurek_decoherence_time(scenario: &Scenario, corrections: &CorrectionFactors) -> Result<f64> {
    let m = &scenario.material;
    positive("temperature", m.temperature)?;
    positive("height", scenario.geometry.height)?;
    positive("coherence_length", scenario.beam.coherence_length)?;
    positive("c1", corrections.c1)?;
    positive("c2", corrections.c2)?;
    non_negative("resistivity", m.resistivity)?;
    let e2 = ELEMENTARY_CHARGE * ELEMENTARY_CHARGE;
    let z = scenario.geometry.height;
    let dx = scenario.beam.coherence_length;
    Ok(4.0 * PLANCK_H * PLANCK_H / (PI * e2 * BOLTZMANN * m.temperature * m.resistivity) * z.powi(3)
        / (dx * dx)
        / (corrections.c1 * corrections.c2))
}

/// Rd = (Δx/λ_th)²·ΔE/(m v²)·C1·C2 with ΔE in eV.
pub fn zurek_decoherence_amount(energy_loss_ev: f64, scenario: &Scenario, corrections: &CorrectionFactors) -> Result<f64> {
    non_negative("energy_loss", energy_loss_ev)?;
    let lambda_th = thermal_wavelength(scenario.material.temperature)?;
    let v = scenario.beam.speed;
    let ratio = scenario.beam.coherence_length / lambda_th;
    let de = energy_loss_ev * ELEMENTARY_CHARGE;
    Ok(ratio * ratio * de / (ELECTRON_MASS * v * v) * corrections.c1 * corrections.c2)
}
