use ewall_core::carriers::{
    solve_steady_1d, solve_steady_2d, CarrierConfig, CarrierState, CarrierSystem, ChargeDistribution, ChopSettings,
    SURFACE_WINDOW,
};
use ewall_core::optics::{chop_trace, ProbeSetup};

fn coarse(mut c: CarrierConfig, nodes: usize) -> CarrierConfig {
    c.solver.nodes = nodes;
    c
}

fn max_rel_change(a: &CarrierState, b: &CarrierState) -> f64 {
    let pairs = a.n.iter().zip(&b.n).chain(a.p.iter().zip(&b.p)).chain(a.n_t.iter().zip(&b.n_t));
    pairs.map(|(x, y)| ((y - x) / x.abs().max(1e-300)).abs()).fold(0.0, f64::max)
}

#[test]
fn dark_equilibrium_is_stationary() {
    for config in [CarrierConfig::super_bandgap(), CarrierConfig::sub_bandgap()] {
        let system = CarrierSystem::from_config(&config).unwrap();
        let dark = system.dark_state();
        let dt = system.explicit_step_bound(&dark).min(1e-9);
        let mut s = dark.clone();
        for _ in 0..20 {
            let next = system.step_explicit(&s, dt, 0.0).unwrap();
            assert!(max_rel_change(&s, &next) <= 1e-12);
            s = next;
        }
        let implicit = system.step_implicit(&dark, 1e-3, 0.0, &config.solver).unwrap();
        assert!(max_rel_change(&dark, &implicit) <= 1e-12);
    }
}

#[test]
fn explicit_step_refuses_unstable_steps() {
    let config = CarrierConfig::super_bandgap();
    let system = CarrierSystem::from_config(&config).unwrap();
    let dark = system.dark_state();
    let bound = system.explicit_step_bound(&dark);
    assert!(system.step_explicit(&dark, 2.0 * bound, 1.0).is_err());
}

#[test]
fn sheet_steady_state_is_neutral_and_bounded() {
    let config = coarse(CarrierConfig::super_bandgap(), 61);
    let (state, charge) = solve_steady_1d(&config).unwrap();
    assert!(charge.total().abs() <= 1e-10 * state.generated_charge, "net {}", charge.total());
    // the profile is a small difference of large populations, so only a looser bound holds
    assert!(charge.total().abs() <= 1e-6 * charge.total_magnitude(), "net {}", charge.total());
    let cap = config.rates.trap_density;
    assert!(state.n_t.iter().all(|&t| (0.0..=cap).contains(&t)));
    assert!(state.n.iter().chain(&state.p).all(|&v| v >= 0.0));
}

#[test]
fn transient_keeps_neutrality() {
    let config = coarse(CarrierConfig::super_bandgap(), 41);
    let system = CarrierSystem::from_config(&config).unwrap();
    let s = system.evolve(&system.dark_state(), 1e-4, 1.0, 1e-5, &config.solver).unwrap();
    let q = system.charge(&s);
    assert!(q.total().abs() <= 1e-10 * s.generated_charge, "net {} generated {}", q.total(), s.generated_charge);
    let cap = config.rates.trap_density;
    assert!(s.n_t.iter().all(|&t| (0.0..=cap).contains(&t)));
}

fn interpolate(charge: &ChargeDistribution, x: f64) -> f64 {
    let xs: Vec<f64> = charge.nodes.iter().map(|n| n[0]).collect();
    let ys = charge.areal_density();
    let j = xs.partition_point(|&v| v < x).clamp(1, xs.len() - 1);
    let t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    ys[j - 1] + t * (ys[j] - ys[j - 1])
}

#[test]
fn sheet_profile_converges_under_grid_halving() {
    let coarse_run = solve_steady_1d(&coarse(CarrierConfig::super_bandgap(), 101)).unwrap().1;
    let fine_run = solve_steady_1d(&coarse(CarrierConfig::super_bandgap(), 202)).unwrap().1;
    let mut diff = 0.0;
    let mut norm = 0.0;
    let density = coarse_run.areal_density();
    for (i, node) in coarse_run.nodes.iter().enumerate() {
        let w = coarse_run.cell_width[i];
        diff += (interpolate(&fine_run, node[0]) - density[i]).abs() * w;
        norm += density[i].abs() * w;
    }
    assert!(diff / norm < 0.05, "L1 change {}", diff / norm);
}

#[test]
fn super_bandgap_centre_negative_wings_positive() {
    let (_, charge) = solve_steady_1d(&CarrierConfig::super_bandgap()).unwrap();
    let centre = interpolate(&charge, 0.0);
    let wing = interpolate(&charge, 600e-6);
    assert!(centre < 0.0, "centre {centre}");
    assert!(wing > 0.0, "wing {wing}");
}

#[test]
fn sub_bandgap_surface_charge_is_negative() {
    let (_, surface) = solve_steady_2d(&CarrierConfig::sub_bandgap()).unwrap();
    assert!(surface.nodes.iter().all(|n| n[1] <= SURFACE_WINDOW));
    assert!(surface.total() < 0.0, "surface net {}", surface.total());
}

#[test]
fn chopped_response_lags_on_a_coarse_grid() {
    let config = coarse(CarrierConfig::super_bandgap(), 41);
    let probe = ProbeSetup::default();
    let mut last_amplitude = f64::INFINITY;
    for f in [4.0, 20.0] {
        let t = chop_trace(&config, &ChopSettings::new(f), &probe).unwrap();
        assert!(t.residual_fraction() > 0.1, "{f} Hz residual {}", t.residual_fraction());
        assert!(t.amplitude() < last_amplitude);
        last_amplitude = t.amplitude();
    }
}
