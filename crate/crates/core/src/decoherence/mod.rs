//! Energy loss and decoherence of an electron flying parallel to a lossy wall.

pub mod corrections;
pub mod dielectric;
pub mod howie;
pub mod matching;
pub mod report;
pub mod scheel;
pub mod zurek;

pub use corrections::{correction_c1, correction_c2, corrections_for, gaussian_beam_width, CorrectionFactors};
pub use dielectric::{drude_dielectric, fresnel_coefficients, principal_sqrt, DielectricModel};
pub use matching::{
    amount_at, expected_trends, log_grid, match_parameter, monotonicity, monotonicity_suite, Knob, MonotonicityCheck,
    ParameterMatch, Trend,
};
pub use howie::{howie_closed_form_p, howie_energy_loss, howie_thermal_p, HowieSettings};
pub use report::{full_report, model_report, DecoherenceReport, Model, ReportSettings};
pub use scheel::{scheel_gamma, ScheelSettings};
pub use zurek::{
    boyer_power, zurek_decoherence_amount, zurek_decoherence_time, zurek_energy_loss, zurek_energy_loss_with_height,
    zurek_relaxation_time,
};
