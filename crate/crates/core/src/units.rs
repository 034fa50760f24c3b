//! Interface units. Everything inside the crate is SI; these helpers sit at the edges.
//!
//! Scenario files carry every number as a string with an explicit unit, e.g. `"6 um"` or
//! `"5 Ohm*m"`. Bare numbers are refused so that a missing unit can never be silently read
//! as SI.

use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE};
use crate::error::{Error, Result};

pub fn ev_to_joule(ev: f64) -> f64 {
    ev * ELEMENTARY_CHARGE
}

pub fn joule_to_ev(j: f64) -> f64 {
    j / ELEMENTARY_CHARGE
}

pub fn um(x: f64) -> f64 {
    x * 1e-6
}

pub fn to_um(x_m: f64) -> f64 {
    x_m * 1e6
}

pub fn nm(x: f64) -> f64 {
    x * 1e-9
}

pub fn ohm_cm_to_ohm_m(rho: f64) -> f64 {
    rho * 1e-2
}

pub fn ohm_m_to_ohm_cm(rho: f64) -> f64 {
    rho * 1e2
}

/// Physical dimension expected by a scenario field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Dimensionless,
    Length,
    Area,
    Time,
    Speed,
    Resistivity,
    Temperature,
    MassRatio,
    Density,
    Energy,
    AngularFrequency,
    Frequency,
    Angle,
    PhotonFlux,
    Mobility,
    Diffusivity,
    RateCoefficient,
    Rate,
}

impl Dimension {
    fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Dimension::Dimensionless => &[("", 1.0), ("1", 1.0)],
            Dimension::Length => &[
                ("m", 1.0),
                ("cm", 1e-2),
                ("mm", 1e-3),
                ("um", 1e-6),
                ("µm", 1e-6),
                ("nm", 1e-9),
            ],
            Dimension::Area => &[("m^2", 1.0), ("cm^2", 1e-4), ("um^2", 1e-12), ("nm^2", 1e-18)],
            Dimension::Time => &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("µs", 1e-6), ("ns", 1e-9), ("ps", 1e-12)],
            Dimension::Speed => &[("m/s", 1.0), ("cm/s", 1e-2), ("km/s", 1e3)],
            Dimension::Resistivity => &[("Ohm*m", 1.0), ("Ohm*cm", 1e-2), ("uOhm*cm", 1e-8), ("µOhm*cm", 1e-8)],
            Dimension::Temperature => &[("K", 1.0)],
            Dimension::MassRatio => &[("m_e", 1.0)],
            Dimension::Density => &[("m^-3", 1.0), ("cm^-3", 1e6)],
            Dimension::Energy => &[("J", 1.0), ("eV", ELEMENTARY_CHARGE), ("keV", 1e3 * ELEMENTARY_CHARGE)],
            Dimension::AngularFrequency => &[("rad/s", 1.0), ("1/s", 1.0)],
            Dimension::Frequency => &[("Hz", 1.0), ("kHz", 1e3)],
            Dimension::Angle => &[("rad", 1.0), ("mrad", 1e-3), ("urad", 1e-6), ("deg", std::f64::consts::PI / 180.0)],
            Dimension::PhotonFlux => &[("m^-2*s^-1", 1.0), ("cm^-2*s^-1", 1e4)],
            Dimension::Mobility => &[("m^2/(V*s)", 1.0), ("cm^2/(V*s)", 1e-4)],
            Dimension::Diffusivity => &[("m^2/s", 1.0), ("cm^2/s", 1e-4)],
            Dimension::RateCoefficient => &[("m^3/s", 1.0), ("cm^3/s", 1e-6)],
            Dimension::Rate => &[("1/s", 1.0), ("1/ms", 1e3)],
        }
    }
}

/// Parse `"<number> <unit>"` into SI for the requested dimension.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64> {
    let text = text.trim();
    let (number, unit) = match text.find(char::is_whitespace) {
        Some(i) => (&text[..i], text[i..].trim()),
        None => (text, ""),
    };
    let value: f64 = number
        .parse()
        .map_err(|_| Error::Config(format!("cannot read a number from {text:?}")))?;
    if !value.is_finite() {
        return Err(Error::Config(format!("non-finite quantity {text:?}")));
    }
    let factor = dim
        .units()
        .iter()
        .find(|(u, _)| *u == unit)
        .map(|(_, f)| *f)
        .ok_or_else(|| {
            let accepted: Vec<&str> = dim.units().iter().map(|(u, _)| *u).collect();
            if unit.is_empty() {
                Error::Config(format!("{text:?} has no unit; expected one of {accepted:?}"))
            } else {
                Error::Config(format!("unit {unit:?} in {text:?} is not one of {accepted:?}"))
            }
        })?;
    // 1.7 / 1e6 rounds correctly where 1.7 * 1e-6 does not
    let inverse = 1.0 / factor;
    if factor < 1.0 && inverse == inverse.round() {
        Ok(value / inverse)
    } else {
        Ok(value * factor)
    }
}

/// Render an SI value in the first (canonical) unit of its dimension.
pub fn format_quantity(value: f64, dim: Dimension) -> String {
    let unit = dim.units()[0].0;
    if unit.is_empty() {
        format!("{value}")
    } else {
        format!("{value} {unit}")
    }
}

/// Kinetic energy ½mv² in eV.
pub fn kinetic_energy_ev(speed: f64) -> f64 {
    joule_to_ev(0.5 * ELECTRON_MASS * speed * speed)
}
