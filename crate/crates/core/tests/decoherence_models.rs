use ewall_core::decoherence::corrections::computed_corrections;
use ewall_core::decoherence::{
    amount_at, correction_c1, correction_c2, corrections_for, expected_trends, gaussian_beam_width, howie_closed_form_p,
    match_parameter, model_report, monotonicity_suite, scheel_gamma, zurek_decoherence_amount, zurek_decoherence_time,
    zurek_energy_loss, CorrectionFactors, Knob, Model, ReportSettings, ScheelSettings,
};
use ewall_core::{Preset, Scenario};
use proptest::prelude::*;

const E: f64 = 1.602_176_634e-19;
const ME: f64 = 9.109_383_701_5e-31;
const HBAR: f64 = 6.626_070_15e-34 / (2.0 * std::f64::consts::PI);
const KB: f64 = 1.380_649e-23;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn randomized(
    base: Preset,
    rho: f64,
    temperature: f64,
    height: f64,
    dx: f64,
    speed: f64,
    tof: f64,
) -> Scenario {
    let mut s = base.scenario();
    s.material.resistivity = rho;
    s.material.temperature = temperature;
    s.geometry.height = height;
    s.beam.coherence_length = dx;
    s.beam.speed = speed;
    s.geometry.time_of_flight = tof;
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn zurek_amount_equals_flight_over_decoherence_time(
        log_rho in -8.0..2.0f64,
        temperature in 1.0..1500.0f64,
        log_z in -8.0..-4.0f64,
        log_dx in -9.0..-5.0f64,
        log_v in 5.0..8.0f64,
        log_t in -11.0..-6.0f64,
        c1 in 1e-3..1.0f64,
        c2 in 1e-3..1.0f64,
    ) {
        let s = randomized(
            Preset::Silicon,
            10f64.powf(log_rho),
            temperature,
            10f64.powf(log_z),
            10f64.powf(log_dx),
            10f64.powf(log_v),
            10f64.powf(log_t),
        );
        let corr = CorrectionFactors { c1, c2, ..CorrectionFactors::NONE };
        let de = zurek_energy_loss(&s).unwrap();
        let rd = zurek_decoherence_amount(de, &s, &corr).unwrap();
        let tau = zurek_decoherence_time(&s, &corr).unwrap();
        let via_time = s.geometry.time_of_flight / tau;
        prop_assert!(rel(rd, via_time) < 1e-9, "{rd} vs {via_time}");
    }
}

#[test]
fn zurek_energy_loss_matches_hand_formula() {
    for p in Preset::ALL {
        let s = p.scenario();
        let (rho, v, z, t) = (s.material.resistivity, s.beam.speed, s.geometry.height, s.geometry.time_of_flight);
        let want = E * E * rho * v * v / (16.0 * std::f64::consts::PI * z.powi(3)) * t / E;
        assert!(rel(zurek_energy_loss(&s).unwrap(), want) < 1e-12, "{}", p.key());
    }
}

#[test]
fn zurek_amount_matches_hand_formula() {
    let s = Preset::GaasIlluminated.scenario();
    let corr = corrections_for(&s).unwrap();
    let de = zurek_energy_loss(&s).unwrap();
    let lambda_th = HBAR / (ME * KB * s.material.temperature).sqrt();
    let want = (s.beam.coherence_length / lambda_th).powi(2) * de * E / (ME * s.beam.speed.powi(2)) * corr.c1 * corr.c2;
    assert!(rel(zurek_decoherence_amount(de, &s, &corr).unwrap(), want) < 1e-12);
}

#[test]
fn zurek_published_columns() {
    let settings = ReportSettings::default();
    for (p, loss, amount) in [
        (Preset::GaasIlluminated, 18.0, 0.13),
        (Preset::GaasDark, 9.0e6, 6.4e4),
        (Preset::Silicon, 2.4, 0.21),
        (Preset::Gold, 3.8e-6, 3.4e-7),
    ] {
        let r = model_report(&p.scenario(), Model::Zurek, &settings).unwrap();
        assert!(rel(r.energy_loss.unwrap(), loss) <= 0.05, "{} loss {:?}", p.key(), r.energy_loss);
        assert!(rel(r.decoherence_amount, amount) <= 0.10, "{} amount {}", p.key(), r.decoherence_amount);
    }
}

#[test]
fn dark_gaas_loss_is_flagged_unphysical() {
    let r = model_report(&Preset::GaasDark.scenario(), Model::Zurek, &ReportSettings::default()).unwrap();
    assert!(r.unphysical_loss);
    let r = model_report(&Preset::GaasIlluminated.scenario(), Model::Zurek, &ReportSettings::default()).unwrap();
    assert!(!r.unphysical_loss);
}

#[test]
fn overlap_corrections() {
    assert_eq!(correction_c1(0.85e-6, 0.85e-6).unwrap(), 1.0);
    assert_eq!(correction_c1(2e-6, 1e-6).unwrap(), 1.0);
    assert!(rel(correction_c1(0.4e-6, 6e-6).unwrap(), (0.4f64 / 6.0).powi(2)) < 1e-14);
    let w = gaussian_beam_width(25e-9, 3e-3, 4.1e-11).unwrap();
    let zr = std::f64::consts::PI * 25e-9f64.powi(2) / 4.1e-11;
    assert!(rel(w, 25e-9 * (1.0 + (3e-3 / zr).powi(2)).sqrt()) < 1e-14);
    assert!(rel(correction_c2(0.4e-6, w).unwrap(), (0.4e-6 / w).powi(2)) < 1e-14);

    let s = Preset::GaasIlluminated.scenario();
    let c = computed_corrections(&s, 25e-9).unwrap();
    assert!(rel(c.c1, 0.0044) <= 0.10, "GaAs c1 {}", c.c1);
    let s = Preset::Silicon.scenario();
    let c = computed_corrections(&s, 25e-9).unwrap();
    assert!(rel(c.c1, 0.055) <= 0.10, "silicon c1 {}", c.c1);
}

#[test]
fn scheel_is_linear_in_flight_time() {
    let settings = ScheelSettings::default();
    for p in [Preset::GaasIlluminated, Preset::Gold] {
        let s = p.scenario();
        let base = scheel_gamma(&s, s.beam.coherence_length, &settings, 0.1).unwrap().value;
        for k in [0.37, 2.0, 11.0] {
            let t = s.geometry.time_of_flight * k;
            let scaled = scheel_gamma(&s.with_time_of_flight(t), s.beam.coherence_length, &settings, 0.1)
                .unwrap()
                .value;
            assert!(rel(scaled, k * base) < 1e-9, "{} k = {k}", p.key());
        }
    }
}

#[test]
fn howie_closed_form_scales_with_resistivity() {
    let s = Preset::Gold.scenario();
    let base = howie_closed_form_p(&s, 0.6e12, 0.125).unwrap();
    let mut t = s.clone();
    t.material.resistivity *= 3.0;
    let tripled = howie_closed_form_p(&t, 0.6e12, 0.125).unwrap();
    assert!(rel(tripled, 3.0 * base) < 1e-12);
    // quadratic in the cutoff
    assert!(rel(howie_closed_form_p(&s, 1.2e12, 0.125).unwrap(), 4.0 * base) < 1e-12);
}

#[test]
fn howie_within_factor_two_at_defaults() {
    let settings = ReportSettings::default();
    for (p, want) in [
        (Preset::GaasIlluminated, 1.49),
        (Preset::GaasDark, 1.5),
        (Preset::GoldChannel, 0.25),
        (Preset::Silicon, 5.8),
        (Preset::Gold, 0.32),
    ] {
        let got = model_report(&p.scenario(), Model::Howie, &settings).unwrap().decoherence_amount;
        assert!(got >= want / 2.0 && got <= want * 2.0, "{}: {got}", p.key());
    }
}

#[test]
fn expected_trends_hold_for_every_preset() {
    let settings = ReportSettings::default();
    for p in Preset::ALL {
        for m in Model::ALL {
            for check in monotonicity_suite(m, &p.scenario(), &settings, 1.0, 6).unwrap() {
                assert!(check.holds, "{} {} {}: {:?}", p.key(), m.key(), check.knob.key(), check.samples);
            }
        }
    }
    assert!(expected_trends(Model::Howie).iter().any(|(k, _)| *k == Knob::Cutoff));
}

#[test]
fn howie_decreases_with_lower_wave_vector_factor() {
    let settings = ReportSettings::default();
    let s = Preset::Silicon.scenario();
    let values: Vec<f64> = [1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0]
        .iter()
        .map(|&a| amount_at(Model::Howie, &s, &settings, Knob::Alpha, a).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
}

#[test]
fn matching_recovers_a_known_height() {
    let settings = ReportSettings::default();
    let s = Preset::Gold.scenario();
    let target = amount_at(Model::ScheelMarkov, &s, &settings, Knob::Height, 0.7e-6).unwrap();
    let m = match_parameter(Model::ScheelMarkov, &s, &settings, Knob::Height, target, (1e-8, 1e-4), 1e-6).unwrap();
    let z = m.parameter.expect("bracketed");
    assert!(rel(z, 0.7e-6) < 1e-4, "{z}");
}

#[test]
fn matching_reports_unbracketed_targets() {
    let settings = ReportSettings::default();
    let s = Preset::Gold.scenario();
    let m = match_parameter(Model::Zurek, &s, &settings, Knob::Height, 1e30, (1e-8, 1e-6), 0.1).unwrap();
    assert!(m.parameter.is_none());
}

#[test]
fn ideal_conductor_does_not_decohere() {
    let mut s = Preset::Gold.scenario();
    s.material.resistivity = 0.0;
    let settings = ReportSettings::default();
    for m in Model::ALL {
        let r = model_report(&s, m, &settings).unwrap();
        assert_eq!(r.decoherence_amount, 0.0, "{}", m.key());
    }
}
