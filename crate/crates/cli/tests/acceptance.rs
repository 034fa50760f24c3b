//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};

use ewall_core::carriers::{solve_steady_1d, CarrierConfig, CarrierState, CarrierSystem, ChargeDistribution, ChopSettings};
use ewall_core::decoherence::{
    fresnel_coefficients, log_grid, match_parameter, monotonicity_suite, scheel_gamma, zurek_decoherence_amount,
    zurek_decoherence_time, zurek_energy_loss, CorrectionFactors, Knob, Model, ReportSettings, ScheelSettings,
};
use ewall_core::optics::{
    channel_height_family, chop_trace, contrast, cutoff_for_energy_loss, deflection_scan, diffraction_pattern,
    gap_transmission, leapfrog, peak_width, propagate_electron, steady_charge, ChargeModel, GapGeometry, GratingSetup,
    ProbeSetup, PropagationSettings, TrajectoryState, UniformField,
};
use ewall_core::reference::{compare_table1, compare_table2, table_values, Comparison, Quantity};
use ewall_core::special::{bose_einstein, exponential_integral_e1, thermal_factor};
use ewall_core::Preset;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const E: f64 = 1.602_176_634e-19;
const ME: f64 = 9.109_383_701_5e-31;
const C: f64 = 299_792_458.0;

struct Verdict {
    pass: bool,
    lines: Vec<String>,
}

impl Verdict {
    fn new(pass: bool) -> Self {
        Verdict { pass, lines: Vec::new() }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn require(&mut self, ok: bool, s: impl Into<String>) {
        let s = s.into();
        self.lines.push(format!("{} {s}", if ok { "ok  " } else { "FAIL" }));
        self.pass &= ok;
    }
}

type Check = Result<Verdict, String>;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn comparison_line(c: &Comparison) -> String {
    format!(
        "{:<34} computed {:>11.4e}  published {:>9.3e}  deviation {:+.1}%  {}",
        c.reference.id,
        c.computed,
        c.reference.value,
        100.0 * c.relative_deviation,
        match c.pass {
            Some(true) => "pass",
            Some(false) => "outside gate",
            None => "ungated",
        }
    )
}

fn gated(rows: &[Comparison], quantity: Quantity, presets: &[&str], v: &mut Verdict) {
    for c in rows.iter().filter(|c| c.reference.quantity == quantity) {
        if presets.contains(&c.reference.preset.as_str()) {
            v.require(c.pass == Some(true), comparison_line(c));
        } else {
            v.note(format!("     {}", comparison_line(c)));
            if let Some(n) = &c.reference.note {
                v.note(format!("       note: {n}"));
            }
        }
    }
}

const FOUR_COLUMNS: [&str; 4] = ["gaas_illuminated", "gaas_dark", "silicon", "gold"];

fn zurek_loss() -> Check {
    let rows = compare_table1(&ReportSettings::default(), None, &[Model::Zurek]).map_err(err)?;
    let mut v = Verdict::new(true);
    gated(&rows, Quantity::EnergyLossEv, &FOUR_COLUMNS, &mut v);
    Ok(v)
}

fn zurek_amount() -> Check {
    let rows = compare_table1(&ReportSettings::default(), None, &[Model::Zurek]).map_err(err)?;
    let mut v = Verdict::new(true);
    gated(&rows, Quantity::DecoherenceAmount, &FOUR_COLUMNS, &mut v);
    let scenario = Preset::GoldChannel.scenario();
    let section = GapGeometry::channel_section();
    let tilt = 2e-3;
    v.note(format!(
        "     gold channel, bounce-averaged over a {:.1} um gap at {tilt} rad tilt:",
        section.entry_gap * 1e6
    ));
    for p in channel_height_family(&scenario, &section, tilt, &log_grid(1e-10, 1e-7, 4)).map_err(err)? {
        v.note(format!(
            "       z_min {:.2e} m  z_eff {:.3e} m  loss {:.3e} eV  amount {:.3e}",
            p.z_min, p.effective_height, p.energy_loss_ev, p.decoherence_amount
        ));
    }
    match cutoff_for_energy_loss(&scenario, &section, tilt, 48.0, (1e-10, 1e-7)).map_err(err)? {
        Some(p) => v.note(format!(
            "       48 eV reached at z_min {:.3e} m (z_eff {:.3e} m) where the amount is {:.3e}, not 16",
            p.z_min, p.effective_height, p.decoherence_amount
        )),
        None => v.note("       no cutoff in [1e-10, 1e-7] m reaches 48 eV"),
    }
    Ok(v)
}

fn correction_factors() -> Check {
    let rows = compare_table2(None).map_err(err)?;
    let mut v = Verdict::new(true);
    for c in &rows {
        match c.pass {
            Some(ok) => v.require(ok, comparison_line(c)),
            None => {
                v.note(format!("     {}", comparison_line(c)));
                if let Some(n) = &c.reference.note {
                    v.note(format!("       note: {n}"));
                }
            }
        }
    }
    Ok(v)
}

fn zurek_dual_path() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mut s = Preset::ALL[rng.gen_range(0..5)].scenario();
        s.material.resistivity = 10f64.powf(rng.gen_range(-8.0..2.0));
        s.material.temperature = rng.gen_range(1.0..1500.0);
        s.geometry.height = 10f64.powf(rng.gen_range(-8.0..-4.0));
        s.beam.coherence_length = 10f64.powf(rng.gen_range(-9.0..-5.0));
        s.beam.speed = 10f64.powf(rng.gen_range(5.0..8.0));
        s.geometry.time_of_flight = 10f64.powf(rng.gen_range(-11.0..-6.0));
        let corr = CorrectionFactors {
            c1: rng.gen_range(1e-3..1.0),
            c2: rng.gen_range(1e-3..1.0),
            ..CorrectionFactors::NONE
        };
        let rd = zurek_decoherence_amount(zurek_energy_loss(&s).map_err(err)?, &s, &corr).map_err(err)?;
        let tau = zurek_decoherence_time(&s, &corr).map_err(err)?;
        worst = worst.max(rel(rd, s.geometry.time_of_flight / tau));
    }
    let mut v = Verdict::new(true);
    v.require(worst <= 1e-9, format!("1000 random scenarios, worst relative difference {worst:.2e}"));
    Ok(v)
}

/// Monotone trends for every preset, and a knob value matching every published amount of
/// `model` within 10%.
fn fallback(model: Model, knobs: &[(Knob, (f64, f64))], v: &mut Verdict) -> Result<bool, String> {
    let settings = ReportSettings::default();
    let mut ok = true;
    for p in Preset::ALL {
        for check in monotonicity_suite(model, &p.scenario(), &settings, 1.0, 6).map_err(err)? {
            ok &= check.holds;
            if !check.holds {
                v.note(format!("       trend in {} broken for {}", check.knob.key(), p.key()));
            }
        }
    }
    v.note(format!("       monotone trends for every preset: {}", if ok { "hold" } else { "broken" }));
    for r in table_values(1) {
        if r.model != Some(model) || r.quantity != Quantity::DecoherenceAmount {
            continue;
        }
        let s = r.preset().map_err(err)?.scenario();
        let mut found = None;
        for &(knob, (lo, hi)) in knobs {
            let base = knob.value(&s, &settings);
            let m = match_parameter(model, &s, &settings, knob, r.value, (base * lo, base * hi), 0.1).map_err(err)?;
            if let (Some(x), Some(ratio)) = (m.parameter, m.ratio) {
                found = Some((knob, x, ratio));
                break;
            }
        }
        match found {
            Some((knob, x, ratio)) => v.note(format!(
                "       {}: {} = {x:.3e} ({ratio:.3}x default) gives {:.3e}",
                r.preset,
                knob.key(),
                r.value
            )),
            None => {
                ok = false;
                v.note(format!("       {}: no match located", r.preset));
            }
        }
    }
    Ok(ok)
}

fn howie_amounts() -> Check {
    let settings = ReportSettings::default();
    let rows = compare_table1(&settings, None, &[Model::Howie]).map_err(err)?;
    let mut v = Verdict::new(true);
    let mut at_defaults = true;
    for c in rows.iter().filter(|c| c.reference.quantity == Quantity::DecoherenceAmount) {
        at_defaults &= c.pass != Some(false);
        v.note(format!("     {}", comparison_line(c)));
    }
    v.note("     sensitivity over cutoff 0.1x..10x and alpha 1/16..1/2:");
    for p in Preset::ALL {
        let s = p.scenario();
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for f in log_grid(0.1, 10.0, 5) {
            for alpha in [1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0] {
                let (s1, r1) = Knob::Alpha.apply(&s, &settings, alpha);
                let (s2, r2) = Knob::Cutoff.apply(&s1, &r1, settings.howie.cutoff * f);
                let x = ewall_core::decoherence::model_report(&s2, Model::Howie, &r2).map_err(err)?.decoherence_amount;
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        v.note(format!("       {:<17} {lo:.3e} .. {hi:.3e}", p.key()));
    }
    if at_defaults {
        v.require(true, "every amount within a factor of 2 at the default cutoff and alpha");
    } else {
        v.note("     factor 2 missed at defaults; fallback contract:");
        let ok = fallback(Model::Howie, &[(Knob::Cutoff, (1e-3, 1e3)), (Knob::Alpha, (0.1, 7.9))], &mut v)?;
        v.require(ok, "fallback: trends hold and every cell matched");
    }
    Ok(v)
}

fn scheel_amounts() -> Check {
    let settings = ReportSettings::default();
    let rows = compare_table1(&settings, None, &[Model::ScheelMarkov]).map_err(err)?;
    let mut v = Verdict::new(true);
    let mut at_defaults = true;
    for c in rows.iter().filter(|c| c.reference.quantity == Quantity::DecoherenceAmount) {
        at_defaults &= c.pass != Some(false);
        v.note(format!("     {}", comparison_line(c)));
    }
    if at_defaults {
        v.require(true, "every gated amount within a factor of 2");
    } else {
        v.note("     factor 2 missed for at least one column; fallback contract:");
        let ok = fallback(Model::ScheelMarkov, &[(Knob::Height, (1e-3, 1e3))], &mut v)?;
        v.require(ok, "fallback: trends hold and every cell matched");
    }
    let mut worst: f64 = 0.0;
    for p in Preset::ALL {
        let s = p.scenario();
        let base = scheel_gamma(&s, s.beam.coherence_length, &ScheelSettings::default(), 0.1).map_err(err)?.value;
        for k in [0.25, 3.0, 17.0] {
            let t = s.with_time_of_flight(k * s.geometry.time_of_flight);
            let g = scheel_gamma(&t, s.beam.coherence_length, &ScheelSettings::default(), 0.1).map_err(err)?.value;
            worst = worst.max(rel(g, k * base));
        }
    }
    v.require(worst <= 1e-9, format!("linear in flight time, worst relative deviation {worst:.2e}"));
    Ok(v)
}

fn e1_oracle(x: f64) -> f64 {
    let upper = (60.0 / x).ln();
    let n = 200_000;
    let h = upper / n as f64;
    let f = |w: f64| (-x * w.exp()).exp();
    let mut sum = f(0.0) + f(upper);
    for i in 1..n {
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    sum * h / 3.0
}

fn fresnel_oracle(k: f64, omega: f64, eps: Complex64) -> (Complex64, Complex64) {
    let root = |z: Complex64| {
        let r = z.sqrt();
        if r.re < 0.0 {
            -r
        } else {
            r
        }
    };
    let k0 = omega / C;
    let outside = root(Complex64::new(k * k - k0 * k0, 0.0));
    let inside = root(Complex64::new(k * k, 0.0) - eps * k0 * k0);
    ((outside - inside) / (outside + inside), (eps * outside - inside) / (eps * outside + inside))
}

fn special_functions() -> Check {
    let mut v = Verdict::new(true);
    let worst_e1 = log_grid(1e-3, 30.0, 60)
        .into_iter()
        .map(|x| exponential_integral_e1(x).map(|e| rel(e, e1_oracle(x))))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?
        .into_iter()
        .fold(0.0, f64::max);
    v.require(worst_e1 <= 1e-8, format!("E1 vs quadrature oracle on [1e-3, 30]: {worst_e1:.2e}"));

    let mut worst_coth: f64 = 0.0;
    for t in [1.0, 77.0, 300.0, 1500.0] {
        for omega in log_grid(1e8, 1e16, 40) {
            let n = bose_einstein(omega, t).map_err(err)?;
            worst_coth = worst_coth.max(rel(2.0 * n + 1.0, thermal_factor(omega, t)));
        }
    }
    v.require(worst_coth <= 1e-12, format!("2n+1 = coth identity: {worst_coth:.2e}"));

    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let mut worst_fresnel: f64 = 0.0;
    let mut drawn = 0;
    while drawn < 100 {
        let omega = 10f64.powf(rng.gen_range(9.0..15.0));
        let k = rng.gen_range(1.1..10.0) * omega / C;
        let eps = Complex64::new(rng.gen_range(-100.0..100.0), 10f64.powf(rng.gen_range(-2.0..2.0)));
        if (eps - 1.0).norm() <= 0.1 {
            continue;
        }
        drawn += 1;
        let (rs, rp) = fresnel_coefficients(k, omega, eps).map_err(err)?;
        let (os, op) = fresnel_oracle(k, omega, eps);
        worst_fresnel = worst_fresnel.max((rs - os).norm() / os.norm()).max((rp - op).norm() / op.norm());
    }
    v.require(worst_fresnel <= 1e-10, format!("Fresnel vs direct ratios, 100 draws: {worst_fresnel:.2e}"));
    Ok(v)
}

fn max_rel_change(a: &CarrierState, b: &CarrierState) -> f64 {
    a.n.iter()
        .zip(&b.n)
        .chain(a.p.iter().zip(&b.p))
        .chain(a.n_t.iter().zip(&b.n_t))
        .map(|(x, y)| ((y - x) / x.abs().max(1e-300)).abs())
        .fold(0.0, f64::max)
}

fn areal_at(charge: &ChargeDistribution, x: f64) -> f64 {
    let xs: Vec<f64> = charge.nodes.iter().map(|n| n[0]).collect();
    let ys = charge.areal_density();
    let j = xs.partition_point(|&v| v < x).clamp(1, xs.len() - 1);
    let t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    ys[j - 1] + t * (ys[j] - ys[j - 1])
}

fn carrier_solver() -> Check {
    let mut v = Verdict::new(true);
    for (name, config, slab) in [
        ("super-bandgap sheet", CarrierConfig::super_bandgap(), false),
        ("sub-bandgap slab", CarrierConfig::sub_bandgap(), true),
    ] {
        let system = if slab {
            CarrierSystem::slab(config.rates, config.illumination, &config.solver)
        } else {
            CarrierSystem::sheet(config.rates, config.illumination, &config.solver)
        }
        .map_err(err)?;
        let dark = system.dark_state();
        let dt = system.explicit_step_bound(&dark).min(1e-9);
        let mut s = dark.clone();
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let next = system.step_explicit(&s, dt, 0.0).map_err(err)?;
            worst = worst.max(max_rel_change(&s, &next));
            s = next;
        }
        v.require(worst <= 1e-12, format!("{name}: dark state change per step {worst:.2e}"));

        let steady = system.solve_steady(&dark, 1.0, &config.solver).map_err(err)?;
        let q = system.charge(&steady);
        let neutral = q.total().abs() / steady.generated_charge;
        v.require(neutral <= 1e-10, format!("{name}: net charge / generated charge {neutral:.2e}"));
        if system.has_traps() {
            let cap = config.rates.trap_density;
            let bounded = steady.n_t.iter().all(|&t| (0.0..=cap).contains(&t));
            v.require(bounded, format!("{name}: trap occupancy within [0, {cap:e}]"));
            let centre = areal_at(&q, 0.0);
            let wing = areal_at(&q, 600e-6);
            v.require(centre < 0.0 && wing > 0.0, format!("{name}: centre {centre:.3e} C/m^2, wing {wing:.3e} C/m^2"));
        } else {
            let surface = steady_charge(&config, ChargeModel::Slab).map_err(err)?;
            v.require(surface.total() < 0.0, format!("{name}: surface net charge {:.3e} C/m", surface.total()));
        }
    }
    let mut fine = CarrierConfig::super_bandgap();
    fine.solver.nodes = 202;
    let coarse = solve_steady_1d(&CarrierConfig::super_bandgap()).map_err(err)?.1;
    let refined = solve_steady_1d(&fine).map_err(err)?.1;
    let density = coarse.areal_density();
    let (mut diff, mut norm) = (0.0, 0.0);
    for (i, node) in coarse.nodes.iter().enumerate() {
        diff += (areal_at(&refined, node[0]) - density[i]).abs() * coarse.cell_width[i];
        norm += density[i].abs() * coarse.cell_width[i];
    }
    v.require(diff / norm < 0.05, format!("grid halving 101 -> 202 nodes, L1 change {:.2}%", 100.0 * diff / norm));
    Ok(v)
}

fn chopped_response() -> Check {
    let config = CarrierConfig::super_bandgap();
    let probe = ProbeSetup::default();
    let mut v = Verdict::new(true);
    let mut last = f64::INFINITY;
    for f in [4.0, 8.0, 12.0, 20.0] {
        let t = chop_trace(&config, &ChopSettings::new(f), &probe).map_err(err)?;
        v.require(
            t.residual_fraction() > 0.1 && t.amplitude() < last,
            format!(
                "{f:>4} Hz: open {:.3e} m, close {:.3e} m, residual {:.1}%, amplitude {:.3e} m",
                t.open,
                t.close,
                100.0 * t.residual_fraction(),
                t.amplitude()
            ),
        );
        last = t.amplitude();
    }
    Ok(v)
}

fn trajectories() -> Check {
    let mut v = Verdict::new(true);
    let speed = 0.01 / 4.1e-10;
    let ez = 30.0;
    let field = UniformField { field: [0.0, 0.0, ez], y0: -1.0, y1: 1.0 };
    let settings = PropagationSettings { y_end: 5e-3, detector_distance: 0.25, max_dt: 1e-12, max_steps: 1_000_000 };
    let r = propagate_electron(&TrajectoryState::along_y(0.0, 0.0, 10e-6, speed), &field, &settings).map_err(err)?;
    let a = -E * ez / ME;
    let t = settings.y_end / speed;
    let want = 0.5 * a * t * t + a * t * settings.detector_distance / speed;
    let d = rel(r.deflection[1], want);
    v.require(d <= 1e-8, format!("uniform field vs closed form: {d:.2e}"));

    let setup = ProbeSetup::default();
    let charge = steady_charge(&CarrierConfig::super_bandgap(), ChargeModel::Sheet).map_err(err)?;
    let layout = setup.layout(&charge);
    let start = TrajectoryState::along_y(0.0, -setup.margin, setup.beam_height, speed);
    let e0 = start.total_energy(&layout);
    let dt = setup.max_step_length / speed;
    let steps = ((setup.stripe_length + 2.0 * setup.margin) / setup.max_step_length) as usize;
    let mut s = start;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        s = leapfrog(&s, &layout, dt, steps / 20);
        worst = worst.max(rel(s.total_energy(&layout), e0));
    }
    v.require(worst <= 1e-8, format!("energy drift over the stripe: {worst:.2e}"));

    let positions: Vec<f64> = (-8..=8).map(|i| i as f64 * 5e-5).collect();
    for (name, config, model) in [
        ("sheet", CarrierConfig::super_bandgap(), ChargeModel::Sheet),
        ("slab", CarrierConfig::sub_bandgap(), ChargeModel::Slab),
    ] {
        let scan = deflection_scan(&config, model, &positions, &setup).map_err(err)?;
        let mut worst: f64 = 0.0;
        let mut complete = true;
        for p in &scan.points {
            match (p.deflection, p.approx) {
                (Some(full), Some(approx)) => worst = worst.max(rel(approx, full)),
                _ => complete = false,
            }
        }
        v.require(
            complete && worst <= 0.05,
            format!("{name} scan, 17 laser positions: fast estimate within {:.2}% of full propagation", 100.0 * worst),
        );
    }
    Ok(v)
}

fn diffraction() -> Check {
    let setup = GratingSetup::from_scenario(&Preset::GaasIlluminated.scenario());
    let mut v = Verdict::new(true);
    let rds = [0.0, 0.05, 0.15, 0.3, 0.6, 1.0, 2.0, 5.0, f64::INFINITY];
    let mut contrasts = Vec::new();
    for rd in rds {
        contrasts.push(contrast(&diffraction_pattern(&setup, rd).map_err(err)?));
    }
    v.require(contrasts[0] >= 0.98, format!("rd = 0 contrast {:.4}", contrasts[0]));
    let decreasing = contrasts.windows(2).all(|w| w[1] < w[0]);
    let listed: Vec<String> = rds.iter().zip(&contrasts).map(|(r, c)| format!("{r}:{c:.4}")).collect();
    v.require(decreasing, format!("contrast strictly decreasing: {}", listed.join(" ")));

    let width = |s: &GratingSetup, rd: f64| -> Result<f64, String> {
        let p = diffraction_pattern(s, rd).map_err(err)?;
        peak_width(&p, 0.0).map(|w| w.1).ok_or_else(|| "no central peak".to_string())
    };
    let narrow = width(&setup, 0.15)?;
    let wide = width(&setup, 1.0)?;
    let mut fine = setup;
    fine.samples = 2 * setup.samples - 1;
    let noise = (width(&fine, 0.15)? - narrow).abs().max((width(&fine, 1.0)? - wide).abs());
    v.require(
        wide - narrow > 3.0 * noise,
        format!(
            "FWHM {:.2} um (rd 0.15) -> {:.2} um (rd 1), margin {:.2e} m vs noise {noise:.2e} m",
            narrow * 1e6,
            wide * 1e6,
            wide - narrow
        ),
    );
    Ok(v)
}

fn gap_trace() -> Check {
    let g = GapGeometry::default();
    let mut v = Verdict::new(true);
    let tilts: Vec<f64> = (-40..=40).map(|i| i as f64 * 2.5e-3).collect();
    let mut t = Vec::new();
    for &a in &tilts {
        t.push(gap_transmission(&g, a).map_err(err)?.transmission);
    }
    let centre = t.len() / 2;
    let max = t.iter().cloned().fold(0.0, f64::max);
    let unimodal = (0..centre).all(|i| t[i] <= t[i + 1] && t[t.len() - 1 - i] <= t[t.len() - 2 - i]);
    let edge = tilts.iter().zip(&t).filter(|(_, &x)| x >= 0.5 * max).map(|(a, _)| a.abs()).fold(0.0, f64::max);
    v.require(
        t[centre] == max && unimodal,
        format!("maximum {max:.3} at tilt 0, unimodal over +-0.1 rad, half-maximum out to {edge:.4} rad"),
    );
    let limit = g.geometric_limit();
    for k in [1.5, 3.0, 10.0] {
        let r = gap_transmission(&g, k * limit).map_err(err)?;
        v.require(
            r.mean_reflections >= 1.0,
            format!("tilt {:.2e} rad ({k}x geometric limit): {:.1} reflections", k * limit, r.mean_reflections),
        );
    }
    Ok(v)
}

fn determinism() -> Check {
    let runs: [&[&str]; 7] = [
        &["table1"],
        &["table2", "--format", "json"],
        &["report", "--format", "json"],
        &["diffract", "--metrics"],
        &["gap", "--tilt", "-0.01:0.01:9"],
        &["sensitivity", "--mode", "matches"],
        &["chop", "--summary", "--nodes", "41", "--frequency", "8"],
    ];
    let dirs = [tempfile::tempdir().map_err(err)?, tempfile::tempdir().map_err(err)?];
    let mut v = Verdict::new(true);
    for args in runs {
        let mut outputs = Vec::new();
        for dir in &dirs {
            let status = Command::new(env!("CARGO_BIN_EXE_ewall"))
                .args(args)
                .arg("--out")
                .arg(dir.path())
                .stderr(std::process::Stdio::null())
                .status()
                .map_err(err)?;
            if !matches!(status.code(), Some(0 | 1)) {
                return Err(format!("ewall {} exited with {status}", args.join(" ")));
            }
            let name = if args[0] == "gap" { "gap".to_string() } else { args[0].to_string() };
            let ext = if args.contains(&"json") { "json" } else { "csv" };
            outputs.push(std::fs::read(dir.path().join(format!("{name}.{ext}"))).map_err(err)?);
        }
        v.require(
            outputs[0] == outputs[1] && !outputs[0].is_empty(),
            format!("ewall {}: {} bytes, identical", args.join(" "), outputs[0].len()),
        );
    }
    Ok(v)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 13] = [
        ("Zurek energy loss, four columns within 5%", zurek_loss),
        ("Zurek decoherence amount within 10%, gold channel reported", zurek_amount),
        ("Correction factors C1 within 10%, C2 within 20%", correction_factors),
        ("Zurek amount equals flight time over decoherence time", zurek_dual_path),
        ("Howie amounts within a factor of 2 (or fallback)", howie_amounts),
        ("Scheel amounts within a factor of 2 (or fallback), linear in time", scheel_amounts),
        ("Special functions against independent oracles", special_functions),
        ("Carrier solver stationarity, neutrality, bounds, convergence, signs", carrier_solver),
        ("Chopped response lags and its amplitude falls with frequency", chopped_response),
        ("Trajectory integrator and fast deflection estimate", trajectories),
        ("Diffraction contrast and peak broadening", diffraction),
        ("Gap transmission and reflections", gap_trace),
        ("Identical CLI runs give identical bytes", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (title, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        let started = std::time::Instant::now();
        let verdict = check().unwrap_or_else(|e| {
            let mut v = Verdict::new(false);
            v.note(format!("error: {e}"));
            v
        });
        println!(
            "{} criterion {n:>2}: {title} ({:.1} s)",
            if verdict.pass { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
        for line in &verdict.lines {
            println!("    {line}");
        }
        if !verdict.pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("all 13 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("{} of 13 criteria fail: {failed:?}", failed.len());
        ExitCode::FAILURE
    }
}
