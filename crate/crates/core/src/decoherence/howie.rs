//! Single-loss-event probability for a charge passing a dielectric surface.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dielectric::{principal_sqrt, DielectricModel};
use crate::constants::{ELEMENTARY_CHARGE, HBAR, LIGHT_SPEED, VACUUM_PERMITTIVITY};
use crate::error::{positive, Result};
use crate::quadrature::{integrate_2d, Integral, QuadratureSettings};
use crate::scenario::Scenario;
use crate::special::{exponential_integral_e1, thermal_factor};
use crate::units::joule_to_ev;

pub const DEFAULT_CUTOFF: f64 = 0.6e12;
pub const DEFAULT_ALPHA: f64 = 0.125;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HowieSettings {
    /// Upper frequency limit ω_m, rad/s.
    pub cutoff: f64,
    /// Lower wave-vector limit is α/Δx.
    pub alpha: f64,
    pub dielectric: DielectricModel,
    pub rel_tol: f64,
    /// When false the coth(ħω/2k_BT) weight is replaced by 1 (the T → 0 limit).
    pub thermal: bool,
}

impl Default for HowieSettings {
    fn default() -> Self {
        HowieSettings {
            cutoff: DEFAULT_CUTOFF,
            alpha: DEFAULT_ALPHA,
            dielectric: DielectricModel::Drude,
            rel_tol: 1e-4,
            thermal: true,
        }
    }
}

/// Intermediate quantities of the loss integrand at one (q, ω).
#[derive(Debug, Clone, Copy)]
pub struct HowieIntegrandContext {
    pub q_x: f64,
    pub omega: f64,
    pub nu0: f64,
    pub nu: Complex64,
    pub loss_function: Complex64,
    pub eps: Complex64,
}

pub fn integrand_context(scenario: &Scenario, model: DielectricModel, q: f64, omega: f64) -> HowieIntegrandContext {
    let v = scenario.beam.speed;
    let k0sq = (omega / LIGHT_SPEED).powi(2);
    let along = (omega / v).powi(2);
    let eps = model.permittivity(&scenario.material, omega);
    let nu0 = (q * q + along - k0sq).sqrt();
    let nu = principal_sqrt(Complex64::new(q * q + along, 0.0) - eps * k0sq);
    let beta2 = (v / LIGHT_SPEED).powi(2);
    let loss_function = -2.0 / (nu + nu0 * eps) + 2.0 * beta2 / (nu + nu0);
    HowieIntegrandContext {
        q_x: q,
        omega,
        nu0,
        nu,
        loss_function,
        eps,
    }
}

/// e²L/(2π²ε₀ħv²), the weight in front of Im λ_e.
fn prefactor(scenario: &Scenario) -> f64 {
    let v = scenario.beam.speed;
    ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * scenario.geometry.interaction_length
        / (2.0 * PI * PI * VACUUM_PERMITTIVITY * HBAR * v * v)
}

/// d²P/(dω dq) without thermal weight or overlap correction.
fn event_density(scenario: &Scenario, model: DielectricModel, q: f64, omega: f64) -> f64 {
    let ctx = integrand_context(scenario, model, q, omega);
    prefactor(scenario) * ctx.loss_function.im * (-2.0 * ctx.nu0 * scenario.geometry.height).exp()
}

struct Domain {
    omega_lo: f64,
    omega_hi: f64,
    q_lo: f64,
    q_hi: f64,
}

fn domain(scenario: &Scenario, settings: &HowieSettings) -> Result<Domain> {
    positive("cutoff", settings.cutoff)?;
    positive("alpha", settings.alpha)?;
    let z = scenario.geometry.height;
    let q_lo = settings.alpha / scenario.beam.coherence_length;
    // exp(−2ν₀z) < e⁻⁸⁰ beyond this
    let q_hi = q_lo + 40.0 / z;
    // Below the charge relaxation rate σ/ε₀ the integrand is flat in ω, so a cut far below
    // both scales drops a negligible sliver.
    let relax = scenario.material.conductivity() / VACUUM_PERMITTIVITY;
    let omega_lo = 1e-9 * settings.cutoff.min(relax);
    Ok(Domain {
        omega_lo,
        omega_hi: settings.cutoff,
        q_lo,
        q_hi,
    })
}

fn integrate_events<W: Fn(f64) -> f64>(
    scenario: &Scenario,
    settings: &HowieSettings,
    label: &str,
    weight: W,
) -> Result<Integral> {
    let d = domain(scenario, settings)?;
    let model = settings.dielectric;
    let quad = QuadratureSettings::new(label, settings.rel_tol);
    integrate_2d(
        |omega, q| weight(omega) * event_density(scenario, model, q, omega),
        d.omega_lo,
        d.omega_hi,
        |_| (d.q_lo, d.q_hi),
        true,
        true,
        &quad,
    )
}

/// Thermally weighted event number P, scaled by the path-overlap correction `c2`.
pub fn howie_thermal_p(scenario: &Scenario, settings: &HowieSettings, c2: f64) -> Result<Integral> {
    positive("c2", c2)?;
    if scenario.material.is_ideal_conductor() {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let t = scenario.material.temperature;
    let thermal = settings.thermal;
    let mut i = integrate_events(scenario, settings, "howie thermal P", |omega| {
        if thermal {
            thermal_factor(omega, t)
        } else {
            1.0
        }
    })?;
    i.value *= c2;
    i.error *= c2;
    Ok(i)
}

/// Mean energy handed to the wall, ∫∫ ħω d²P, in eV.
pub fn howie_energy_loss(scenario: &Scenario, settings: &HowieSettings) -> Result<Integral> {
    if scenario.material.is_ideal_conductor() {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut i = integrate_events(scenario, settings, "howie energy loss", |omega| HBAR * omega)?;
    i.value = joule_to_ev(i.value);
    i.error = joule_to_ev(i.error);
    Ok(i)
}

/// Non-retarded, zero-temperature, conductor-limit value
/// e²Lω_m²/(4π²ħσv²)·E1(2zα/Δx).
pub fn howie_closed_form_p(scenario: &Scenario, cutoff: f64, alpha: f64) -> Result<f64> {
    positive("cutoff", cutoff)?;
    positive("alpha", alpha)?;
    let sigma = scenario.material.conductivity();
    if sigma.is_infinite() {
        return Ok(0.0);
    }
    positive("conductivity", sigma)?;
    let v = scenario.beam.speed;
    let bound = 2.0 * scenario.geometry.height * alpha / scenario.beam.coherence_length;
    let e2 = ELEMENTARY_CHARGE * ELEMENTARY_CHARGE;
    Ok(e2 * scenario.geometry.interaction_length * cutoff * cutoff / (4.0 * PI * PI * HBAR * sigma * v * v)
        * exponential_integral_e1(bound)?)
}
