//! Exponential integral and thermal occupation factors.

use crate::constants::{BOLTZMANN, HBAR};
use crate::error::{positive, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// E1(x) = ∫ₓ^∞ e^{−s}/s ds for x > 0.
///
/// Power series below x = 1, modified Lentz continued fraction above.
pub fn exponential_integral_e1(x: f64) -> Result<f64> {
    positive("x", x)?;
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            term *= -x / kf;
            let add = term / kf;
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        Ok(-EULER_GAMMA - x.ln() - sum)
    } else {
        // E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let delta = c * d;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        Ok(h * (-x).exp())
    }
}

/// ħω/(k_B T)
pub fn reduced_energy(omega: f64, temperature: f64) -> f64 {
    HBAR * omega / (BOLTZMANN * temperature)
}

/// Bose–Einstein occupation 1/(e^{ħω/k_BT} − 1). Large arguments give 0 rather than overflow.
pub fn bose_einstein(omega: f64, temperature: f64) -> Result<f64> {
    positive("omega", omega)?;
    positive("temperature", temperature)?;
    Ok(bose_einstein_reduced(reduced_energy(omega, temperature)))
}

pub(crate) fn bose_einstein_reduced(x: f64) -> f64 {
    if x > 700.0 {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// coth(ħω/2k_BT), the thermal enhancement of emission plus absorption.
pub fn thermal_factor(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 1.0;
    }
    coth(0.5 * reduced_energy(omega, temperature))
}

pub fn coth(x: f64) -> f64 {
    if x.abs() > 20.0 {
        x.signum() * (1.0 + 2.0 * (-2.0 * x.abs()).exp())
    } else {
        1.0 / x.tanh()
    }
}
