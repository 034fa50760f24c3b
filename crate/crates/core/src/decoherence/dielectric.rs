//! Surface response: Drude permittivity and Fresnel reflection.

use num_complex::Complex64;

use crate::constants::{LIGHT_SPEED, VACUUM_PERMITTIVITY};
use crate::error::{positive, Result};
use crate::scenario::Material;

/// Which permittivity the loss integrands use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DielectricModel {
    /// 1 − ω_p²/(ω(ω + iγ)) from carrier density, effective mass and resistivity.
    Drude,
    /// 1 + iσ/(ε₀ω), the low-frequency conductor limit.
    Conductivity,
}

impl DielectricModel {
    pub fn permittivity(self, material: &Material, omega: f64) -> Complex64 {
        match self {
            DielectricModel::Drude => {
                drude_unchecked(omega, material.plasma_frequency(), material.damping_rate())
            }
            DielectricModel::Conductivity => {
                Complex64::new(1.0, material.conductivity() / (VACUUM_PERMITTIVITY * omega))
            }
        }
    }
}

pub fn drude_dielectric(omega: f64, plasma: f64, damping: f64) -> Result<Complex64> {
    positive("omega", omega)?;
    Ok(drude_unchecked(omega, plasma, damping))
}

fn drude_unchecked(omega: f64, plasma: f64, damping: f64) -> Complex64 {
    // Written out in real and imaginary parts to keep Im ε exact when γ ≫ ω.
    let denom = omega * (omega * omega + damping * damping);
    let wp2 = plasma * plasma;
    Complex64::new(1.0 - wp2 * omega / denom, wp2 * damping / denom)
}

/// Square root with Re ≥ 0, and Im ≥ 0 on the cut.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
        -r
    } else {
        r
    }
}

/// (r_s, r_p) for in-plane wave vector `k_par` at frequency `omega`.
///
/// Uses λ = √(K² − ω²/c²) outside and k = √(K² − εω²/c²) inside. The forms below are
/// algebraically the ratios (λ − k)/(λ + k) and (ελ − k)/(ελ + k), rearranged so that the
/// small imaginary parts survive when |ε| is huge or ω/c ≪ K.
pub fn fresnel_coefficients(k_par: f64, omega: f64, eps: Complex64) -> Result<(Complex64, Complex64)> {
    positive("k_parallel", k_par)?;
    positive("omega", omega)?;
    Ok(fresnel_unchecked(k_par, omega, eps))
}

pub(crate) fn fresnel_unchecked(k_par: f64, omega: f64, eps: Complex64) -> (Complex64, Complex64) {
    let k0sq = (omega / LIGHT_SPEED).powi(2);
    let ksq = k_par * k_par;
    let lam = principal_sqrt(Complex64::new(ksq - k0sq, 0.0));
    let kin = principal_sqrt(Complex64::new(ksq, 0.0) - eps * k0sq);
    let sum = lam + kin;
    // λ² − k² = (ε − 1)ω²/c²
    let r_s = (eps - 1.0) * k0sq / (sum * sum);
    let r_p = Complex64::new(1.0, 0.0) - 2.0 * kin / (eps * lam + kin);
    (r_s, r_p)
}
