//! Electron optics: fields of wall charges, trajectories, deflection scans, diffraction
//! patterns with partial coherence, and rays through a wedge gap.

mod deflection;
mod diffraction;
mod field;
mod gap;
mod trajectory;

pub use deflection::{
    chop_trace, chop_trace_from, deflection_full, deflection_full_layout, deflection_scan, steady_charge,
    vertical_shift_approx, ChargeModel, ChopTrace, DeflectionScan, ProbeSetup, ScanPoint, ShiftEstimator,
};
pub use diffraction::{
    contrast, diffraction_pattern, pattern_for_slits, peak_width, DiffractionPattern, GratingSetup, PeakMetrics,
};
pub use field::{field_from_charges, ChargeLayout, ElectricField, LineSource, PointSource, UniformField};
pub use gap::{
    bounce_averaged_z3, channel_height_family, cutoff_for_energy_loss, gap_transmission, trace_ray, GapGeometry,
    GapTransmission, HeightFamilyPoint, RaySegment, RayTrace,
};
pub use trajectory::{
    leapfrog, leapfrog_step, propagate_electron, Outcome, Propagation, PropagationSettings, TrajectoryState,
};
