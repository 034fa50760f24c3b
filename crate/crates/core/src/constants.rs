//! CODATA 2018 values in SI units.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub planck_h: f64,
    pub hbar: f64,
    pub elementary_charge: f64,
    pub electron_mass: f64,
    pub boltzmann: f64,
    pub vacuum_permittivity: f64,
    pub light_speed: f64,
}

pub const PLANCK_H: f64 = 6.626_070_15e-34;
pub const HBAR: f64 = PLANCK_H / (2.0 * PI);
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
pub const LIGHT_SPEED: f64 = 299_792_458.0;

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    planck_h: PLANCK_H,
    hbar: HBAR,
    elementary_charge: ELEMENTARY_CHARGE,
    electron_mass: ELECTRON_MASS,
    boltzmann: BOLTZMANN,
    vacuum_permittivity: VACUUM_PERMITTIVITY,
    light_speed: LIGHT_SPEED,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CONSTANTS
    }
}

impl PhysicalConstants {
    pub fn all_positive(&self) -> bool {
        [
            self.planck_h,
            self.hbar,
            self.elementary_charge,
            self.electron_mass,
            self.boltzmann,
            self.vacuum_permittivity,
            self.light_speed,
        ]
        .iter()
        .all(|v| v.is_finite() && *v > 0.0)
    }
}
