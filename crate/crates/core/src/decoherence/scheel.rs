//! Markovian visibility loss from fluctuating surface fields, integrated over the
//! in-plane wave vector.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dielectric::{fresnel_unchecked, DielectricModel};
use crate::constants::{ELEMENTARY_CHARGE, HBAR, LIGHT_SPEED, VACUUM_PERMITTIVITY};
use crate::error::{positive, Result};
use crate::quadrature::{integrate_2d, Integral, QuadratureSettings};
use crate::scenario::Scenario;
use crate::special::{coth, reduced_energy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheelSettings {
    pub dielectric: DielectricModel,
    pub rel_tol: f64,
}

impl Default for ScheelSettings {
    fn default() -> Self {
        ScheelSettings {
            dielectric: DielectricModel::Drude,
            rel_tol: 1e-3,
        }
    }
}

/// Intermediate quantities of the visibility integrand at one (k_x, k_y).
///
/// `k_y` runs along the flight direction, so the probed frequency is ω = k_y·v.
#[derive(Debug, Clone, Copy)]
pub struct ScheelIntegrandContext {
    pub k_x: f64,
    pub k_y: f64,
    pub k_parallel: f64,
    pub cos_phi: f64,
    pub gamma_v2: f64,
    pub separation: f64,
    pub r_s: Complex64,
    pub r_p: Complex64,
    pub occupation_weight: f64,
    pub plasma: f64,
    pub damping: f64,
}

pub fn integrand_context(
    scenario: &Scenario,
    model: DielectricModel,
    separation: f64,
    kx: f64,
    ky: f64,
) -> ScheelIntegrandContext {
    let v = scenario.beam.speed;
    let beta = v / LIGHT_SPEED;
    let k = kx.hypot(ky);
    let cos_phi = ky / k;
    let gamma_v2 = 1.0 - beta * beta * cos_phi * cos_phi;
    let omega = ky * v;
    let eps = model.permittivity(&scenario.material, omega);
    let (r_s, r_p) = fresnel_unchecked(k, omega, eps);
    let occupation_weight = coth(0.5 * reduced_energy(omega, scenario.material.temperature));
    ScheelIntegrandContext {
        k_x: kx,
        k_y: ky,
        k_parallel: k,
        cos_phi,
        gamma_v2,
        separation,
        r_s,
        r_p,
        occupation_weight,
        plasma: scenario.material.plasma_frequency(),
        damping: scenario.material.damping_rate(),
    }
}

fn integrand(scenario: &Scenario, model: DielectricModel, separation: f64, kx: f64, ky: f64) -> f64 {
    let c = integrand_context(scenario, model, separation, kx, ky);
    let beta2 = (scenario.beam.speed / LIGHT_SPEED).powi(2);
    let gamma = c.gamma_v2.sqrt();
    let k = c.k_parallel;
    let response = c.r_p * c.gamma_v2 + c.r_s * (beta2 * kx * kx / (k * k));
    let which_way = 1.0 - (kx * separation).cos();
    // 1 − cos underflows to 0 for tiny arguments; use the series there.
    let which_way = if kx * separation < 1e-4 {
        0.5 * (kx * separation).powi(2)
    } else {
        which_way
    };
    which_way * c.occupation_weight * (-2.0 * k * scenario.geometry.height * gamma).exp() / (2.0 * k * gamma)
        * response.im
}

/// Γ such that the fringe visibility is e^{−Γ}, with the path separation entering through
/// 1 − cos(k_x·separation). Includes the path-overlap factor `c2`.
pub fn scheel_gamma(scenario: &Scenario, separation: f64, settings: &ScheelSettings, c2: f64) -> Result<Integral> {
    positive("separation", separation)?;
    positive("c2", c2)?;
    let t = scenario.geometry.time_of_flight;
    if t == 0.0 || scenario.material.is_ideal_conductor() {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let z = scenario.geometry.height;
    let v = scenario.beam.speed;
    let relax = scenario.material.conductivity() / VACUUM_PERMITTIVITY;
    let k_hi = 40.0 / z;
    let ky_lo = 1e-9 * (1.0 / z).min(relax / v);
    let kx_lo = 1e-6 * (1.0 / z).min(1.0 / separation);
    let model = settings.dielectric;
    let quad = QuadratureSettings::new("scheel gamma", settings.rel_tol);
    let raw = integrate_2d(
        |ky, kx| integrand(scenario, model, separation, kx, ky),
        ky_lo,
        k_hi,
        |_| (kx_lo, k_hi),
        true,
        true,
        &quad,
    )?;
    // Four quadrants of an even integrand.
    let scale = 4.0 * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * t / (VACUUM_PERMITTIVITY * HBAR * 4.0 * PI * PI) * c2;
    Ok(Integral {
        value: raw.value * scale,
        error: raw.error * scale,
        evaluations: raw.evaluations,
    })
}
