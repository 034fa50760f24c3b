//! Photo-generated carriers in a semiconductor wall.
//!
//! Two models share one finite-volume solver: a surface sheet with electron traps for
//! above-gap light, and a lateral × depth slab without traps for below-gap light. Both
//! produce a [`ChargeDistribution`] of line charges running along the electron flight path.

mod chop;
mod export;
mod field;
mod mesh;
mod params;
mod rates;
mod solver;
mod state;
mod transport;

pub use chop::{chopped_response, ChopPhase, ChopResponse, ChopSettings, ChopSnapshot};
pub use export::{charge_to_json, write_charge_csv, write_series_csv};
pub use field::{
    field_at_points, in_plane_permittivity, rectangle_field, self_consistent_field, slab_cell_field, softened_line_field,
    strip_factor, surface_image_factor,
};
pub use mesh::{Face, Mesh, MeshKind};
pub use params::{
    carrier_config_from_json, CarrierConfig, IlluminationKind, IlluminationProfile, RateParameters, SolverSettings,
};
pub use rates::{generation_terms, optical_areal, recombination_terms, GenerationTerms, RecombinationTerms};
pub use solver::CarrierSystem;
pub use state::{pairwise_sum, CarrierState, ChargeDistribution};
pub use transport::{bernoulli, currents_1d, sg_flux};

use crate::error::Result;

/// Depth of the surface layer whose charge counts as surface charge, m.
pub const SURFACE_WINDOW: f64 = 10e-6;

/// One explicit step of the sheet model.
pub fn step_1d(system: &CarrierSystem, state: &CarrierState, dt: f64) -> Result<CarrierState> {
    system.step_explicit(state, dt, 1.0)
}

/// One explicit step of the slab model.
pub fn step_2d(system: &CarrierSystem, state: &CarrierState, dt: f64) -> Result<CarrierState> {
    system.step_explicit(state, dt, 1.0)
}

/// Steady state of the sheet model under constant light.
pub fn solve_steady_1d(config: &CarrierConfig) -> Result<(CarrierState, ChargeDistribution)> {
    let system = CarrierSystem::sheet(config.rates, config.illumination, &config.solver)?;
    let state = system.solve_steady(&system.dark_state(), 1.0, &config.solver)?;
    let charge = system.charge(&state);
    Ok((state, charge))
}

/// Steady state of the slab model. The returned distribution is the surface window.
pub fn solve_steady_2d(config: &CarrierConfig) -> Result<(CarrierState, ChargeDistribution)> {
    let system = CarrierSystem::slab(config.rates, config.illumination, &config.solver)?;
    let state = system.solve_steady(&system.dark_state(), 1.0, &config.solver)?;
    let charge = system.charge(&state).surface_window(SURFACE_WINDOW);
    Ok((state, charge))
}
