//! Local generation and recombination terms.

use serde::Serialize;

use super::params::{IlluminationProfile, RateParameters};
use super::state::CarrierState;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationTerms {
    /// Band-to-band thermal generation c_np·n0·p0, m⁻³s⁻¹.
    pub thermal_band: Vec<f64>,
    /// Optical band-to-band generation per volume, m⁻³s⁻¹.
    pub optical_band: Vec<f64>,
    /// The same per unit surface area, m⁻²s⁻¹: F(1−R)η·profile.
    pub optical_areal: Vec<f64>,
    /// Thermal emission from traps e_tn·n_t.
    pub thermal_trap: Vec<f64>,
    /// Optical emission from traps σ·F·n_t with the local flux.
    pub optical_trap: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecombinationTerms {
    /// c_np·n·p
    pub band: Vec<f64>,
    /// c_nt·n·(trap_density − n_t)
    pub capture: Vec<f64>,
}

impl RecombinationTerms {
    /// Electron loss R_n.
    pub fn electrons(&self) -> Vec<f64> {
        self.band.iter().zip(&self.capture).map(|(a, b)| a + b).collect()
    }

    /// Hole loss R_p.
    pub fn holes(&self) -> Vec<f64> {
        self.band.clone()
    }

    /// Trap filling G_t.
    pub fn trap_filling(&self) -> Vec<f64> {
        self.capture.clone()
    }
}

/// Areal optical generation per node, F(1−R)η·profile(x), before spreading over depth.
pub fn optical_areal(rates: &RateParameters, illumination: &IlluminationProfile, xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|&x| rates.absorbed_flux() * illumination.lateral(x)).collect()
}

pub fn generation_terms(
    state: &CarrierState,
    rates: &RateParameters,
    illumination: &IlluminationProfile,
    layer_thickness: f64,
) -> GenerationTerms {
    let xs: Vec<f64> = state.mesh.nodes.iter().map(|n| n[0]).collect();
    let optical_areal = optical_areal(rates, illumination, &xs);
    let optical_band = optical_areal.iter().map(|g| g / layer_thickness).collect();
    let nt = |i: usize| state.n_t.get(i).copied().unwrap_or(0.0);
    let count = xs.len();
    GenerationTerms {
        thermal_band: vec![rates.c_np * rates.n0 * rates.p0; count],
        optical_band,
        optical_areal,
        thermal_trap: (0..count).map(|i| rates.e_tn * nt(i)).collect(),
        optical_trap: (0..count)
            .map(|i| rates.sigma_opt * rates.photon_flux * illumination.lateral(xs[i]) * nt(i))
            .collect(),
    }
}

pub fn recombination_terms(state: &CarrierState, rates: &RateParameters) -> RecombinationTerms {
    let count = state.n.len();
    let nt = |i: usize| state.n_t.get(i).copied().unwrap_or(0.0);
    RecombinationTerms {
        band: (0..count).map(|i| rates.c_np * state.n[i] * state.p[i]).collect(),
        capture: (0..count)
            .map(|i| {
                if rates.has_traps() {
                    rates.c_nt * state.n[i] * (rates.trap_density - nt(i))
                } else {
                    0.0
                }
            })
            .collect(),
    }
}
