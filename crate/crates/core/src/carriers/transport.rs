//! Drift-diffusion currents.

use super::params::RateParameters;
use super::state::CarrierState;
use crate::constants::ELEMENTARY_CHARGE;

/// Bernoulli function x/(eˣ − 1) and its derivative.
pub fn bernoulli(x: f64) -> (f64, f64) {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        (1.0 - 0.5 * x + x2 / 12.0 - x2 * x2 / 720.0, -0.5 + x / 6.0 - x2 * x / 180.0)
    } else if x > 700.0 {
        (0.0, 0.0)
    } else {
        let em = x.exp_m1();
        (x / em, 1.0 / em - x * (em + 1.0) / (em * em))
    }
}

/// Scharfetter–Gummel particle flux from node a to node b.
///
/// `drift` is the drift velocity (m/s) along a→b. Returns the flux and its derivatives with
/// respect to the two densities and the drift velocity.
#[inline]
pub fn sg_flux(diffusivity: f64, distance: f64, drift: f64, ca: f64, cb: f64) -> (f64, f64, f64, f64) {
    let u = drift * distance / diffusivity;
    let (bp, dbp) = bernoulli(u);
    let (bm, dbm) = bernoulli(-u);
    let g = diffusivity / distance;
    let flux = g * (bm * ca - bp * cb);
    // d/du of (B(−u)ca − B(u)cb) = −B'(−u)ca − B'(u)cb ; du/ddrift = distance/D
    let d_drift = -dbm * ca - dbp * cb;
    (flux, g * bm, -g * bp, d_drift)
}

/// Conventional current densities J_n = eμ_n n ξ + eD_n n', J_p = eμ_p p ξ − eD_p p' on a sheet,
/// with centred differences inside and one-sided ones at the ends.
pub fn currents_1d(state: &CarrierState, rates: &RateParameters) -> (Vec<f64>, Vec<f64>) {
    let xs: Vec<f64> = state.mesh.nodes.iter().map(|n| n[0]).collect();
    let xi = state.lateral_field();
    let dn = derivative(&xs, &state.n);
    let dp = derivative(&xs, &state.p);
    let e = ELEMENTARY_CHARGE;
    let jn = (0..xs.len()).map(|i| e * rates.mu_n * state.n[i] * xi[i] + e * rates.d_n * dn[i]).collect();
    let jp = (0..xs.len()).map(|i| e * rates.mu_p * state.p[i] * xi[i] - e * rates.d_p * dp[i]).collect();
    (jn, jp)
}

fn derivative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            if n < 2 {
                0.0
            } else if i == 0 {
                (y[1] - y[0]) / (x[1] - x[0])
            } else if i == n - 1 {
                (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2])
            } else {
                let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
                // second-order on non-uniform spacing
                (y[i + 1] * h0 * h0 - y[i - 1] * h1 * h1 + y[i] * (h1 * h1 - h0 * h0)) / (h0 * h1 * (h0 + h1))
            }
        })
        .collect()
}
