//! Decoherence of slow electrons flying above semiconductor and metal walls.
//!
//! The crate has three parts: closed-form and integral estimates of how much a wall
//! decoheres a passing electron ([`decoherence`]), drift-diffusion kinetics of photo-excited
//! carriers that charge the wall ([`carriers`]), and the electron-optics needed to turn those
//! charges into beam deflections and diffraction patterns ([`optics`]).

pub mod carriers;
pub mod constants;
pub mod decoherence;
pub mod optics;
pub mod error;
pub mod quadrature;
pub mod reference;
pub mod scenario;
pub mod special;
pub mod units;

pub use error::{Error, Result};
pub use scenario::{Material, BeamParameters, Geometry, Preset, Scenario};
