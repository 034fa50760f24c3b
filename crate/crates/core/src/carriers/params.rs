//! Rate constants, illumination and solver knobs, with their unit-suffixed file format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{parse_quantity, Dimension};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateParameters {
    /// m²/(V·s)
    pub mu_n: f64,
    pub mu_p: f64,
    /// m²/s
    pub d_n: f64,
    pub d_p: f64,
    /// Band-to-band capture coefficient, m³/s.
    pub c_np: f64,
    /// Capture coefficient into empty traps, m³/s.
    pub c_nt: f64,
    /// Thermal emission rate out of traps, 1/s.
    pub e_tn: f64,
    /// Optical emission cross-section of trapped electrons, m².
    pub sigma_opt: f64,
    /// Incident photon flux at the beam centre, 1/(m²·s).
    pub photon_flux: f64,
    pub reflectivity: f64,
    pub quantum_efficiency: f64,
    pub n0: f64,
    pub p0: f64,
    /// Total trap density, m⁻³. Zero disables the trap equation.
    pub trap_density: f64,
    pub relative_permittivity: f64,
}

impl RateParameters {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("mu_n", self.mu_n),
            ("mu_p", self.mu_p),
            ("d_n", self.d_n),
            ("d_p", self.d_p),
            ("c_np", self.c_np),
            ("c_nt", self.c_nt),
            ("e_tn", self.e_tn),
            ("sigma_opt", self.sigma_opt),
            ("photon_flux", self.photon_flux),
            ("n0", self.n0),
            ("p0", self.p0),
            ("trap_density", self.trap_density),
        ];
        for (what, v) in all {
            crate::error::non_negative(what, v)?;
        }
        for (what, v) in [("reflectivity", self.reflectivity), ("quantum_efficiency", self.quantum_efficiency)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(what, v, "must lie in [0, 1]"));
            }
        }
        crate::error::positive("d_n", self.d_n)?;
        crate::error::positive("d_p", self.d_p)?;
        crate::error::positive("relative_permittivity", self.relative_permittivity)?;
        Ok(())
    }

    pub fn has_traps(&self) -> bool {
        self.trap_density > 0.0
    }

    /// Trap occupancy in the dark when capture from the n0 background balances emission.
    pub fn dark_trap_occupancy(&self) -> f64 {
        if !self.has_traps() {
            return 0.0;
        }
        let capture = self.c_nt * self.n0;
        if capture + self.e_tn == 0.0 {
            0.0
        } else {
            capture * self.trap_density / (capture + self.e_tn)
        }
    }

    /// Photons absorbed per unit area and time at the beam centre.
    pub fn absorbed_flux(&self) -> f64 {
        self.photon_flux * (1.0 - self.reflectivity) * self.quantum_efficiency
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IlluminationKind {
    SingleGaussian,
    TwoGaussian,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IlluminationProfile {
    pub kind: IlluminationKind,
    /// Beam centre x₀, m.
    pub center: f64,
    /// 1/e half-width of the main Gaussian, m.
    pub width: f64,
    pub secondary_width: f64,
    /// Peak of the wide Gaussian relative to the narrow one.
    pub secondary_relative_strength: f64,
    /// Absorption depth 1/α, m.
    pub penetration_depth: f64,
}

impl IlluminationProfile {
    pub fn validate(&self) -> Result<()> {
        crate::error::positive("width", self.width)?;
        crate::error::positive("penetration_depth", self.penetration_depth)?;
        if self.kind == IlluminationKind::TwoGaussian {
            crate::error::positive("secondary_width", self.secondary_width)?;
            crate::error::non_negative("secondary_relative_strength", self.secondary_relative_strength)?;
        }
        Ok(())
    }

    pub fn off(&self) -> IlluminationProfile {
        IlluminationProfile {
            kind: IlluminationKind::Off,
            ..*self
        }
    }

    pub fn centered_at(&self, x0: f64) -> IlluminationProfile {
        IlluminationProfile { center: x0, ..*self }
    }

    pub fn is_on(&self) -> bool {
        self.kind != IlluminationKind::Off
    }

    /// Relative surface intensity at x (1 at the centre of the main Gaussian).
    pub fn lateral(&self, x: f64) -> f64 {
        let d2 = (x - self.center).powi(2);
        match self.kind {
            IlluminationKind::Off => 0.0,
            IlluminationKind::SingleGaussian => (-d2 / (self.width * self.width)).exp(),
            IlluminationKind::TwoGaussian => {
                (-d2 / (self.width * self.width)).exp()
                    + self.secondary_relative_strength * (-d2 / (self.secondary_width * self.secondary_width)).exp()
            }
        }
    }

    /// Relative intensity at lateral position x and depth below the surface, for a slab of
    /// thickness `thickness`. For the two-Gaussian kind the light entering as the narrow spot
    /// is progressively redistributed into the wide one with depth, reaching the wide profile
    /// at the back face.
    pub fn in_bulk(&self, x: f64, depth: f64, thickness: f64) -> f64 {
        let decay = (-depth / self.penetration_depth).exp();
        let d2 = (x - self.center).powi(2);
        match self.kind {
            IlluminationKind::Off => 0.0,
            IlluminationKind::SingleGaussian => decay * (-d2 / (self.width * self.width)).exp(),
            IlluminationKind::TwoGaussian => {
                let blend = (depth / thickness).clamp(0.0, 1.0);
                let narrow = (-d2 / (self.width * self.width)).exp();
                let wide = self.secondary_relative_strength * (-d2 / (self.secondary_width * self.secondary_width)).exp();
                decay * ((1.0 - blend) * narrow + blend * wide)
            }
        }
    }
}

/// Grid and time-stepping knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverSettings {
    /// Lateral domain is [−half_width, half_width], m.
    pub half_width: f64,
    pub nodes: usize,
    /// Slab thickness for the 2D model, m.
    pub thickness: f64,
    pub depth_nodes: usize,
    /// Thickness of the surface sheet carrying the 1D carriers, m.
    pub layer_thickness: f64,
    /// 0 for uniform sheet cells, 1 for pure cosine clustering at the ends.
    pub edge_clustering: f64,
    /// Steady state is declared when max |Δu|/(|u| + floor) per second falls below this.
    pub steady_rate_tol: f64,
    pub max_steps: usize,
    pub newton_tol: f64,
    pub max_newton: usize,
    pub initial_dt: f64,
    pub max_dt: f64,
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        crate::error::positive("half_width", self.half_width)?;
        crate::error::positive("thickness", self.thickness)?;
        crate::error::positive("layer_thickness", self.layer_thickness)?;
        crate::error::positive("initial_dt", self.initial_dt)?;
        crate::error::positive("max_dt", self.max_dt)?;
        if !(0.0..=1.0).contains(&self.edge_clustering) {
            return Err(Error::domain("edge_clustering", self.edge_clustering, "must lie in [0, 1]"));
        }
        if self.nodes < 5 || self.depth_nodes < 3 {
            return Err(Error::Config("carrier grid needs at least 5 lateral and 3 depth nodes".into()));
        }
        Ok(())
    }
}

/// A complete carrier model configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarrierConfig {
    pub rates: RateParameters,
    pub illumination: IlluminationProfile,
    pub solver: SolverSettings,
}

impl CarrierConfig {
    pub fn validate(&self) -> Result<()> {
        self.rates.validate()?;
        self.illumination.validate()?;
        self.solver.validate()
    }

    /// Above-gap illumination of GaAs with surface traps.
    pub fn super_bandgap() -> CarrierConfig {
        carrier_config_from_json(include_str!("../../data/carriers/super_bandgap.json"))
            .expect("bundled carrier file is valid")
    }

    /// Below-gap illumination generating throughout the slab, no traps.
    pub fn sub_bandgap() -> CarrierConfig {
        carrier_config_from_json(include_str!("../../data/carriers/sub_bandgap.json"))
            .expect("bundled carrier file is valid")
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RatesFile {
    mu_n: String,
    mu_p: String,
    d_n: String,
    d_p: String,
    c_np: String,
    c_nt: String,
    e_tn: String,
    sigma_opt: String,
    photon_flux: String,
    reflectivity: String,
    quantum_efficiency: String,
    n0: String,
    p0: String,
    trap_density: String,
    relative_permittivity: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IlluminationFile {
    kind: IlluminationKind,
    center: String,
    width: String,
    #[serde(default)]
    secondary_width: Option<String>,
    #[serde(default)]
    secondary_relative_strength: Option<String>,
    penetration_depth: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverFile {
    half_width: String,
    nodes: usize,
    thickness: String,
    depth_nodes: usize,
    layer_thickness: String,
    edge_clustering: f64,
    steady_rate_tol: String,
    max_steps: usize,
    newton_tol: String,
    max_newton: usize,
    initial_dt: String,
    max_dt: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CarrierFile {
    rates: RatesFile,
    illumination: IlluminationFile,
    solver: SolverFile,
}

fn q(text: &str, dim: Dimension, field: &str) -> Result<f64> {
    parse_quantity(text, dim).map_err(|e| Error::Config(format!("{field}: {e}")))
}

pub fn carrier_config_from_json(text: &str) -> Result<CarrierConfig> {
    let f: CarrierFile = serde_json::from_str(text).map_err(|e| Error::Config(format!("carrier file: {e}")))?;
    let r = &f.rates;
    let rates = RateParameters {
        mu_n: q(&r.mu_n, Dimension::Mobility, "rates.mu_n")?,
        mu_p: q(&r.mu_p, Dimension::Mobility, "rates.mu_p")?,
        d_n: q(&r.d_n, Dimension::Diffusivity, "rates.d_n")?,
        d_p: q(&r.d_p, Dimension::Diffusivity, "rates.d_p")?,
        c_np: q(&r.c_np, Dimension::RateCoefficient, "rates.c_np")?,
        c_nt: q(&r.c_nt, Dimension::RateCoefficient, "rates.c_nt")?,
        e_tn: q(&r.e_tn, Dimension::Rate, "rates.e_tn")?,
        sigma_opt: q(&r.sigma_opt, Dimension::Area, "rates.sigma_opt")?,
        photon_flux: q(&r.photon_flux, Dimension::PhotonFlux, "rates.photon_flux")?,
        reflectivity: q(&r.reflectivity, Dimension::Dimensionless, "rates.reflectivity")?,
        quantum_efficiency: q(&r.quantum_efficiency, Dimension::Dimensionless, "rates.quantum_efficiency")?,
        n0: q(&r.n0, Dimension::Density, "rates.n0")?,
        p0: q(&r.p0, Dimension::Density, "rates.p0")?,
        trap_density: q(&r.trap_density, Dimension::Density, "rates.trap_density")?,
        relative_permittivity: q(&r.relative_permittivity, Dimension::Dimensionless, "rates.relative_permittivity")?,
    };
    let i = &f.illumination;
    let illumination = IlluminationProfile {
        kind: i.kind,
        center: q(&i.center, Dimension::Length, "illumination.center")?,
        width: q(&i.width, Dimension::Length, "illumination.width")?,
        secondary_width: match &i.secondary_width {
            Some(s) => q(s, Dimension::Length, "illumination.secondary_width")?,
            None => 0.0,
        },
        secondary_relative_strength: match &i.secondary_relative_strength {
            Some(s) => q(s, Dimension::Dimensionless, "illumination.secondary_relative_strength")?,
            None => 0.0,
        },
        penetration_depth: q(&i.penetration_depth, Dimension::Length, "illumination.penetration_depth")?,
    };
    let s = &f.solver;
    let solver = SolverSettings {
        half_width: q(&s.half_width, Dimension::Length, "solver.half_width")?,
        nodes: s.nodes,
        thickness: q(&s.thickness, Dimension::Length, "solver.thickness")?,
        depth_nodes: s.depth_nodes,
        layer_thickness: q(&s.layer_thickness, Dimension::Length, "solver.layer_thickness")?,
        edge_clustering: s.edge_clustering,
        steady_rate_tol: q(&s.steady_rate_tol, Dimension::Rate, "solver.steady_rate_tol")?,
        max_steps: s.max_steps,
        newton_tol: q(&s.newton_tol, Dimension::Dimensionless, "solver.newton_tol")?,
        max_newton: s.max_newton,
        initial_dt: q(&s.initial_dt, Dimension::Time, "solver.initial_dt")?,
        max_dt: q(&s.max_dt, Dimension::Time, "solver.max_dt")?,
    };
    let cfg = CarrierConfig {
        rates,
        illumination,
        solver,
    };
    cfg.validate()?;
    Ok(cfg)
}
