use ewall_core::decoherence::fresnel_coefficients;
use ewall_core::special::{bose_einstein, coth, exponential_integral_e1, thermal_factor};
use num_complex::Complex64;
use proptest::prelude::*;

/// E1(x) = ∫₀^∞ exp(−x·eʷ) dw (substituting s = x·eʷ), integrated with composite Simpson.
fn e1_oracle(x: f64) -> f64 {
    let upper = (60.0 / x).ln();
    let n = 200_000;
    let h = upper / n as f64;
    let f = |w: f64| (-x * w.exp()).exp();
    let mut sum = f(0.0) + f(upper);
    for i in 1..n {
        let w = i as f64 * h;
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(w);
    }
    sum * h / 3.0
}

#[test]
fn e1_matches_quadrature_oracle() {
    let mut x = 1e-3;
    while x <= 30.0 {
        let got = exponential_integral_e1(x).unwrap();
        let want = e1_oracle(x);
        assert!(((got - want) / want).abs() < 1e-8, "x = {x}: {got} vs {want}");
        x *= 1.17;
    }
    let got = exponential_integral_e1(30.0).unwrap();
    assert!(((got - e1_oracle(30.0)) / got).abs() < 1e-8);
}

#[test]
fn e1_known_values() {
    // Abramowitz & Stegun table values
    for (x, want) in [(0.5, 0.559_773_594_776_160_8), (1.0, 0.219_383_934_395_520_3), (2.0, 0.048_900_510_708_061_1)] {
        let got = exponential_integral_e1(x).unwrap();
        assert!(((got - want) / want).abs() < 1e-13, "x = {x}");
    }
}

#[test]
fn e1_rejects_non_positive() {
    assert!(exponential_integral_e1(0.0).is_err());
    assert!(exponential_integral_e1(-1.0).is_err());
}

#[test]
fn occupation_coth_identity() {
    for temperature in [1.0, 4.2, 77.0, 300.0, 1200.0] {
        let mut omega = 1e8;
        while omega < 1e16 {
            let n = bose_einstein(omega, temperature).unwrap();
            let c = thermal_factor(omega, temperature);
            assert!(((2.0 * n + 1.0 - c) / c).abs() < 1e-12, "ω = {omega}, T = {temperature}");
            omega *= 3.1;
        }
    }
}

#[test]
fn coth_matches_exponential_form() {
    for x in [1e-6_f64, 1e-3, 0.1, 1.0, 5.0, 19.9, 20.1, 40.0, -0.3, -25.0] {
        let e = (2.0 * x).exp_m1();
        let want = (e + 2.0) / e;
        assert!(((coth(x) - want) / want).abs() < 1e-12, "x = {x}");
    }
}

const C: f64 = 299_792_458.0;

fn sqrt_re_pos(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re < 0.0 {
        -r
    } else {
        r
    }
}

/// Textbook ratios, evaluated directly.
fn fresnel_oracle(k: f64, omega: f64, eps: Complex64) -> (Complex64, Complex64) {
    let k0 = omega / C;
    let outside = sqrt_re_pos(Complex64::new(k * k - k0 * k0, 0.0));
    let inside = sqrt_re_pos(Complex64::new(k * k, 0.0) - eps * k0 * k0);
    ((outside - inside) / (outside + inside), (eps * outside - inside) / (eps * outside + inside))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fresnel_matches_direct_ratios(
        log_omega in 9.0..15.0f64,
        k_over_k0 in 1.1..10.0f64,
        eps_re in -100.0..100.0f64,
        log_eps_im in -2.0..2.0f64,
    ) {
        let omega = 10f64.powf(log_omega);
        let k = k_over_k0 * omega / C;
        let eps = Complex64::new(eps_re, 10f64.powf(log_eps_im));
        prop_assume!((eps - 1.0).norm() > 0.1);
        let (rs, rp) = fresnel_coefficients(k, omega, eps).unwrap();
        let (os, op) = fresnel_oracle(k, omega, eps);
        prop_assert!((rs - os).norm() <= 1e-10 * os.norm(), "r_s {rs} vs {os}");
        prop_assert!((rp - op).norm() <= 1e-10 * op.norm(), "r_p {rp} vs {op}");
    }
}

#[test]
fn fresnel_quasi_static_limit() {
    let eps = Complex64::new(-40.0, 3.0);
    let (rs, rp) = fresnel_coefficients(1e9, 1e10, eps).unwrap();
    let want = (eps - 1.0) / (eps + 1.0);
    assert!((rp - want).norm() < 1e-9);
    assert!(rs.norm() < 1e-9);
}
