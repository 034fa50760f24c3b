//! Materials, beam kinematics, geometry and their assembly into a scenario.

use serde::{Deserialize, Serialize};

use crate::constants::{BOLTZMANN, ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR, LIGHT_SPEED, PLANCK_H};
use crate::error::{non_negative, positive, Error, Result};
use crate::units::{kinetic_energy_ev, parse_quantity, Dimension};

/// Dimensionless factor applied to the uncertainty estimate ħ/(p·θ) of the transverse
/// coherence length. Fitted once so that the collimation geometry of the experiment
/// (12.7 µm and 2 µm slits, 25 cm apart, 2.44e7 m/s) gives 400 nm.
pub const DEFAULT_COHERENCE_CALIBRATION: f64 = 2.478;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Material {
    pub name: String,
    /// Ω·m. Zero marks an ideal conductor.
    pub resistivity: f64,
    /// K
    pub temperature: f64,
    pub effective_mass_ratio: f64,
    /// m⁻³
    pub carrier_density: f64,
}

impl Material {
    pub fn new(
        name: impl Into<String>,
        resistivity: f64,
        temperature: f64,
        effective_mass_ratio: f64,
        carrier_density: f64,
    ) -> Result<Self> {
        non_negative("resistivity", resistivity)?;
        positive("temperature", temperature)?;
        positive("effective_mass_ratio", effective_mass_ratio)?;
        if effective_mass_ratio > 1.1 {
            return Err(Error::domain("effective_mass_ratio", effective_mass_ratio, "must be <= 1.1"));
        }
        positive("carrier_density", carrier_density)?;
        Ok(Material {
            name: name.into(),
            resistivity,
            temperature,
            effective_mass_ratio,
            carrier_density,
        })
    }

    /// S/m; infinite for an ideal conductor.
    pub fn conductivity(&self) -> f64 {
        1.0 / self.resistivity
    }

    pub fn is_ideal_conductor(&self) -> bool {
        self.resistivity == 0.0
    }

    pub fn effective_mass(&self) -> f64 {
        self.effective_mass_ratio * ELECTRON_MASS
    }

    /// ω_p = √(N e²/(ε₀ m*)).
    pub fn plasma_frequency(&self) -> f64 {
        (self.carrier_density * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE
            / (crate::constants::VACUUM_PERMITTIVITY * self.effective_mass()))
        .sqrt()
    }

    /// Drude damping rate N e² ρ / m*.
    pub fn damping_rate(&self) -> f64 {
        self.carrier_density * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * self.resistivity / self.effective_mass()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeamParameters {
    /// m/s
    pub speed: f64,
    pub coherence_length: f64,
    pub slit1_width: f64,
    pub slit2_width: f64,
    pub slit_separation: f64,
}

impl BeamParameters {
    pub fn new(
        speed: f64,
        coherence_length: f64,
        slit1_width: f64,
        slit2_width: f64,
        slit_separation: f64,
    ) -> Result<Self> {
        de_broglie_wavelength(speed)?;
        positive("coherence_length", coherence_length)?;
        positive("slit1_width", slit1_width)?;
        positive("slit2_width", slit2_width)?;
        positive("slit_separation", slit_separation)?;
        Ok(BeamParameters {
            speed,
            coherence_length,
            slit1_width,
            slit2_width,
            slit_separation,
        })
    }

    /// Builds the beam with Δx estimated from the collimation slits.
    pub fn from_collimation(
        speed: f64,
        slit1_width: f64,
        slit2_width: f64,
        slit_separation: f64,
        calibration: f64,
    ) -> Result<Self> {
        let dx = coherence_length(slit1_width, slit2_width, slit_separation, speed, calibration)?;
        Self::new(speed, dx, slit1_width, slit2_width, slit_separation)
    }

    pub fn beta(&self) -> f64 {
        self.speed / LIGHT_SPEED
    }

    pub fn de_broglie_wavelength(&self) -> f64 {
        PLANCK_H / (ELECTRON_MASS * self.speed)
    }

    pub fn kinetic_energy_ev(&self) -> f64 {
        kinetic_energy_ev(self.speed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Geometry {
    /// Beam height above the surface, m.
    pub height: f64,
    pub interaction_length: f64,
    pub time_of_flight: f64,
    pub grating_period: f64,
    pub grating_slit_width: f64,
    pub grating_to_wall_distance: f64,
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        positive("height", self.height)?;
        positive("interaction_length", self.interaction_length)?;
        non_negative("time_of_flight", self.time_of_flight)?;
        positive("grating_period", self.grating_period)?;
        positive("grating_slit_width", self.grating_slit_width)?;
        non_negative("grating_to_wall_distance", self.grating_to_wall_distance)?;
        if self.grating_slit_width > self.grating_period {
            return Err(Error::domain(
                "grating_slit_width",
                self.grating_slit_width,
                "wider than the grating period",
            ));
        }
        Ok(())
    }
}

/// How the overlap corrections of a scenario are obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorrectionSource {
    /// Values taken as given (the published correction table).
    Tabulated { c1: f64, c2: f64, waist: f64 },
    /// c1 from Δx/z, c2 from the Gaussian-beam width grown from `waist` over the grating-to-wall distance.
    Computed { waist: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub label: String,
    pub material: Material,
    pub beam: BeamParameters,
    pub geometry: Geometry,
    pub corrections: CorrectionSource,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        let travelled = self.geometry.time_of_flight * self.beam.speed;
        if self.geometry.time_of_flight > 0.0
            && ((travelled - self.geometry.interaction_length) / self.geometry.interaction_length).abs() > 1e-9
        {
            return Err(Error::Config(format!(
                "{}: speed × time of flight = {travelled:e} m but interaction length is {:e} m",
                self.label, self.geometry.interaction_length
            )));
        }
        if let CorrectionSource::Tabulated { c1, c2, waist } = self.corrections {
            for (what, v) in [("c1", c1), ("c2", c2)] {
                if !(v > 0.0 && v <= 1.0) {
                    return Err(Error::domain(what, v, "correction factors lie in (0, 1]"));
                }
            }
            positive("waist", waist)?;
        }
        Ok(())
    }

    /// Copy with the flight time replaced and the interaction length kept consistent.
    pub fn with_time_of_flight(&self, t: f64) -> Scenario {
        let mut s = self.clone();
        s.geometry.time_of_flight = t;
        if t > 0.0 {
            s.geometry.interaction_length = t * s.beam.speed;
        }
        s
    }
}

pub fn beam_speed_from_tof(length: f64, t_tof: f64) -> Result<f64> {
    positive("length", length)?;
    positive("time_of_flight", t_tof)?;
    Ok(length / t_tof)
}

pub fn de_broglie_wavelength(v: f64) -> Result<f64> {
    if !(v > 0.0 && v < LIGHT_SPEED) {
        return Err(Error::domain("speed", v, "must satisfy 0 < v < c"));
    }
    Ok(PLANCK_H / (ELECTRON_MASS * v))
}

/// Δx = κ·ħ/(p·θ) with θ = (s1 + s2)/(2·D) the collimation divergence.
pub fn coherence_length(slit1: f64, slit2: f64, separation: f64, v: f64, calibration: f64) -> Result<f64> {
    positive("slit_separation", separation)?;
    positive("slit1_width", slit1)?;
    positive("slit2_width", slit2)?;
    positive("calibration", calibration)?;
    de_broglie_wavelength(v)?;
    let divergence = (slit1 + slit2) / (2.0 * separation);
    let momentum = ELECTRON_MASS * v;
    Ok(calibration * HBAR / (momentum * divergence))
}

pub fn thermal_wavelength(temperature: f64) -> Result<f64> {
    positive("temperature", temperature)?;
    Ok(HBAR / (ELECTRON_MASS * BOLTZMANN * temperature).sqrt())
}

// ---------------------------------------------------------------------------
// Scenario files

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    name: String,
    resistivity: String,
    temperature: String,
    effective_mass_ratio: String,
    carrier_density: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BeamFile {
    #[serde(default)]
    speed: Option<String>,
    #[serde(default)]
    coherence_length: Option<String>,
    slit1_width: String,
    slit2_width: String,
    slit_separation: String,
    #[serde(default)]
    coherence_calibration: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryFile {
    height: String,
    interaction_length: String,
    time_of_flight: String,
    grating_period: String,
    grating_slit_width: String,
    grating_to_wall_distance: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorrectionsFile {
    waist: String,
    #[serde(default)]
    c1: Option<String>,
    #[serde(default)]
    c2: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    label: String,
    material: MaterialFile,
    beam: BeamFile,
    geometry: GeometryFile,
    corrections: CorrectionsFile,
}

fn q(text: &str, dim: Dimension, field: &str) -> Result<f64> {
    parse_quantity(text, dim).map_err(|e| Error::Config(format!("{field}: {e}")))
}

/// Parse a scenario from JSON text. Every number must be a string carrying its unit.
pub fn scenario_from_json(text: &str) -> Result<Scenario> {
    let file: ScenarioFile =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario file: {e}")))?;
    let m = &file.material;
    let material = Material::new(
        m.name.clone(),
        q(&m.resistivity, Dimension::Resistivity, "material.resistivity")?,
        q(&m.temperature, Dimension::Temperature, "material.temperature")?,
        q(&m.effective_mass_ratio, Dimension::MassRatio, "material.effective_mass_ratio")?,
        q(&m.carrier_density, Dimension::Density, "material.carrier_density")?,
    )?;

    let g = &file.geometry;
    let geometry = Geometry {
        height: q(&g.height, Dimension::Length, "geometry.height")?,
        interaction_length: q(&g.interaction_length, Dimension::Length, "geometry.interaction_length")?,
        time_of_flight: q(&g.time_of_flight, Dimension::Time, "geometry.time_of_flight")?,
        grating_period: q(&g.grating_period, Dimension::Length, "geometry.grating_period")?,
        grating_slit_width: q(&g.grating_slit_width, Dimension::Length, "geometry.grating_slit_width")?,
        grating_to_wall_distance: q(
            &g.grating_to_wall_distance,
            Dimension::Length,
            "geometry.grating_to_wall_distance",
        )?,
    };
    geometry.validate()?;

    let b = &file.beam;
    let speed = match &b.speed {
        Some(s) => q(s, Dimension::Speed, "beam.speed")?,
        None => beam_speed_from_tof(geometry.interaction_length, geometry.time_of_flight)?,
    };
    let slit1 = q(&b.slit1_width, Dimension::Length, "beam.slit1_width")?;
    let slit2 = q(&b.slit2_width, Dimension::Length, "beam.slit2_width")?;
    let sep = q(&b.slit_separation, Dimension::Length, "beam.slit_separation")?;
    let beam = match &b.coherence_length {
        Some(dx) => BeamParameters::new(speed, q(dx, Dimension::Length, "beam.coherence_length")?, slit1, slit2, sep)?,
        None => {
            let kappa = match &b.coherence_calibration {
                Some(k) => q(k, Dimension::Dimensionless, "beam.coherence_calibration")?,
                None => DEFAULT_COHERENCE_CALIBRATION,
            };
            BeamParameters::from_collimation(speed, slit1, slit2, sep, kappa)?
        }
    };

    let c = &file.corrections;
    let waist = q(&c.waist, Dimension::Length, "corrections.waist")?;
    let corrections = match (&c.c1, &c.c2) {
        (Some(c1), Some(c2)) => CorrectionSource::Tabulated {
            c1: q(c1, Dimension::Dimensionless, "corrections.c1")?,
            c2: q(c2, Dimension::Dimensionless, "corrections.c2")?,
            waist,
        },
        (None, None) => CorrectionSource::Computed { waist },
        _ => {
            return Err(Error::Config(
                "corrections: give both c1 and c2, or neither to compute them".into(),
            ))
        }
    };

    let scenario = Scenario {
        label: file.label,
        material,
        beam,
        geometry,
        corrections,
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_scenario(path: &std::path::Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    scenario_from_json(&text)
}

/// The five wall configurations of the published comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    GaasIlluminated,
    GaasDark,
    GoldChannel,
    Silicon,
    Gold,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::GaasIlluminated,
        Preset::GaasDark,
        Preset::GoldChannel,
        Preset::Silicon,
        Preset::Gold,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Preset::GaasIlluminated => "gaas_illuminated",
            Preset::GaasDark => "gaas_dark",
            Preset::GoldChannel => "gold_channel",
            Preset::Silicon => "silicon",
            Preset::Gold => "gold",
        }
    }

    pub fn from_key(key: &str) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.key() == key)
    }

    pub fn source(self) -> &'static str {
        match self {
            Preset::GaasIlluminated => include_str!("../data/scenarios/gaas_illuminated.json"),
            Preset::GaasDark => include_str!("../data/scenarios/gaas_dark.json"),
            Preset::GoldChannel => include_str!("../data/scenarios/gold_channel.json"),
            Preset::Silicon => include_str!("../data/scenarios/silicon.json"),
            Preset::Gold => include_str!("../data/scenarios/gold.json"),
        }
    }

    pub fn scenario(self) -> Scenario {
        scenario_from_json(self.source()).expect("bundled scenario files are valid")
    }
}
