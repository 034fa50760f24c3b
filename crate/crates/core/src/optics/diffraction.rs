//! Far-field grating patterns with partially decohered slit pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GratingSetup {
    /// m
    pub period: f64,
    pub slit_width: f64,
    /// 1/e half-width of the Gaussian illumination across the grating, m.
    pub beam_half_width: f64,
    /// de Broglie wavelength, m.
    pub wavelength: f64,
    /// Path separation at which rd = 1 leaves a coherence of 1/e, m.
    pub path_separation: f64,
    /// Grating to detector, m.
    pub detector_distance: f64,
    /// Gaussian detector blur (standard deviation), m.
    pub blur_sigma: f64,
    /// Detector samples across the window.
    pub samples: usize,
    /// The window spans ± this many diffraction orders.
    pub window_orders: f64,
}

impl GratingSetup {
    pub fn from_scenario(s: &Scenario) -> GratingSetup {
        GratingSetup {
            period: s.geometry.grating_period,
            slit_width: s.geometry.grating_slit_width,
            beam_half_width: 1.5e-6,
            wavelength: s.beam.de_broglie_wavelength(),
            path_separation: s.beam.coherence_length,
            detector_distance: 0.25,
            blur_sigma: 10e-6,
            samples: 4001,
            window_orders: 2.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("period", self.period),
            ("slit_width", self.slit_width),
            ("beam_half_width", self.beam_half_width),
            ("wavelength", self.wavelength),
            ("path_separation", self.path_separation),
            ("detector_distance", self.detector_distance),
            ("window_orders", self.window_orders),
        ] {
            crate::error::positive(what, v)?;
        }
        crate::error::non_negative("blur_sigma", self.blur_sigma)?;
        if self.slit_width > self.period {
            return Err(Error::domain("slit_width", self.slit_width, "cannot exceed the grating period"));
        }
        if self.samples < 101 {
            return Err(Error::Config("diffraction pattern needs at least 101 samples".into()));
        }
        Ok(())
    }

    /// Spacing of diffraction orders on the detector, m.
    pub fn order_spacing(&self) -> f64 {
        self.wavelength * self.detector_distance / self.period
    }

    /// Slit centres and illumination amplitudes, covering ±2 beam half-widths.
    pub fn slits(&self) -> Vec<(f64, f64)> {
        let half = (2.0 * self.beam_half_width / self.period).ceil() as i64;
        (-half..=half)
            .map(|j| {
                let x = j as f64 * self.period;
                (x, (-(x / self.beam_half_width).powi(2)).exp())
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakMetrics {
    pub order: i32,
    /// m on the detector
    pub center: f64,
    /// Full width at half maximum, m.
    pub width: f64,
    pub contrast: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffractionPattern {
    /// Detector coordinate, m.
    pub positions: Vec<f64>,
    /// Normalised to unit integral (trapezoid rule on `positions`).
    pub intensity: Vec<f64>,
    /// The fully decohered pattern through the same blur and normalisation; fringe contrast is
    /// measured against it so the single-slit envelope does not count as a fringe.
    pub envelope: Vec<f64>,
    pub rd: f64,
    pub peaks: Vec<PeakMetrics>,
    /// Spacing of diffraction orders, m.
    pub order_spacing: f64,
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    let terms: Vec<f64> = x.windows(2).zip(y.windows(2)).map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1])).collect();
    crate::carriers::pairwise_sum(&terms)
}

fn normalise(x: &[f64], y: &mut [f64]) {
    let total = trapezoid(x, y);
    if total > 0.0 {
        for v in y.iter_mut() {
            *v /= total;
        }
    }
}

fn blur(y: &[f64], step: f64, sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return y.to_vec();
    }
    let reach = (5.0 * sigma / step).ceil() as isize;
    let kernel: Vec<f64> = (-reach..=reach).map(|k| (-0.5 * (k as f64 * step / sigma).powi(2)).exp()).collect();
    let norm: f64 = kernel.iter().sum();
    let n = y.len() as isize;
    (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for (k, w) in (-reach..=reach).zip(&kernel) {
                let j = i + k;
                if (0..n).contains(&j) {
                    acc += w * y[j as usize];
                }
            }
            acc / norm
        })
        .collect()
}

fn sinc2(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0
    } else {
        (x.sin() / x).powi(2)
    }
}

/// Raw intensity for slits with amplitudes `slits` and pair coherence `coherence(separation)`.
fn raw_pattern(setup: &GratingSetup, slits: &[(f64, f64)], coherence: &dyn Fn(f64) -> f64, xs: &[f64]) -> Vec<f64> {
    let n = slits.len();
    // group pair products by separation index (slits are equally spaced)
    let mut weights = vec![0.0; n];
    for m in 0..n {
        let s: f64 = (0..n - m).map(|j| slits[j].1 * slits[j + m].1).sum();
        weights[m] = if m == 0 { s } else { 2.0 * s * coherence(m as f64 * setup.period) };
    }
    let k = 2.0 * std::f64::consts::PI / (setup.wavelength * setup.detector_distance);
    xs.iter()
        .map(|&x| {
            let phase = k * setup.period * x;
            let fringes: f64 = weights.iter().enumerate().map(|(m, w)| w * (m as f64 * phase).cos()).sum();
            let env = sinc2(0.5 * k * setup.slit_width * x);
            (env * fringes).max(0.0)
        })
        .collect()
}

/// Pattern for an arbitrary set of equally spaced slits; `slits` are (centre, amplitude).
pub fn pattern_for_slits(setup: &GratingSetup, slits: &[(f64, f64)], rd: f64) -> Result<DiffractionPattern> {
    setup.validate()?;
    if rd.is_nan() || rd < 0.0 {
        return Err(Error::domain("rd", rd, "must be >= 0 (infinity means fully decohered)"));
    }
    if slits.is_empty() {
        return Err(Error::Config("no slits".into()));
    }
    let spacing = setup.order_spacing();
    let half = setup.window_orders * spacing;
    let step = 2.0 * half / (setup.samples - 1) as f64;
    let xs: Vec<f64> = (0..setup.samples).map(|i| -half + i as f64 * step).collect();
    let scale = setup.path_separation;
    let coherence = move |s: f64| {
        if rd.is_infinite() {
            0.0
        } else {
            (-rd * (s / scale).powi(2)).exp()
        }
    };
    let mut intensity = blur(&raw_pattern(setup, slits, &coherence, &xs), step, setup.blur_sigma);
    normalise(&xs, &mut intensity);
    let mut envelope = blur(&raw_pattern(setup, slits, &|_| 0.0, &xs), step, setup.blur_sigma);
    normalise(&xs, &mut envelope);
    let mut pattern = DiffractionPattern {
        positions: xs,
        intensity,
        envelope,
        rd,
        peaks: Vec::new(),
        order_spacing: spacing,
    };
    pattern.peaks = peak_metrics(&pattern);
    Ok(pattern)
}

pub fn diffraction_pattern(setup: &GratingSetup, rd: f64) -> Result<DiffractionPattern> {
    pattern_for_slits(setup, &setup.slits(), rd)
}

fn fringe_ratio(p: &DiffractionPattern) -> Vec<f64> {
    let peak = p.envelope.iter().fold(0.0_f64, |a, &b| a.max(b));
    p.intensity
        .iter()
        .zip(&p.envelope)
        .map(|(i, e)| if *e > 1e-12 * peak { i / e } else { 0.0 })
        .collect()
}

fn contrast_in(ratio: &[f64], xs: &[f64], lo: f64, hi: f64) -> f64 {
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    for (x, r) in xs.iter().zip(ratio) {
        if *x >= lo && *x <= hi {
            max = max.max(*r);
            min = min.min(*r);
        }
    }
    if !(max > 0.0) || max + min <= 0.0 {
        0.0
    } else {
        ((max - min) / (max + min)).clamp(0.0, 1.0)
    }
}

/// Fringe contrast (I_max − I_min)/(I_max + I_min) between the first orders, with the
/// single-slit envelope divided out. 0 for a flat pattern.
pub fn contrast(pattern: &DiffractionPattern) -> f64 {
    let ratio = fringe_ratio(pattern);
    let s = pattern.order_spacing;
    contrast_in(&ratio, &pattern.positions, -s, s)
}

/// Full width at half maximum of the peak nearest `near`, searched within ± half an order.
pub fn peak_width(pattern: &DiffractionPattern, near: f64) -> Option<(f64, f64)> {
    let xs = &pattern.positions;
    let y = &pattern.intensity;
    let s = pattern.order_spacing;
    let idx: Vec<usize> = (0..xs.len()).filter(|&i| (xs[i] - near).abs() <= 0.5 * s).collect();
    let &top = idx.iter().max_by(|&&a, &&b| y[a].total_cmp(&y[b]))?;
    if top == 0 || top == xs.len() - 1 {
        return None;
    }
    let half = 0.5 * y[top];
    let mut left = None;
    for i in (1..=top).rev() {
        if y[i - 1] <= half {
            let t = (half - y[i - 1]) / (y[i] - y[i - 1]);
            left = Some(xs[i - 1] + t * (xs[i] - xs[i - 1]));
            break;
        }
    }
    let mut right = None;
    for i in top..xs.len() - 1 {
        if y[i + 1] <= half {
            let t = (y[i] - half) / (y[i] - y[i + 1]);
            right = Some(xs[i] + t * (xs[i + 1] - xs[i]));
            break;
        }
    }
    Some((xs[top], right? - left?))
}

fn peak_metrics(p: &DiffractionPattern) -> Vec<PeakMetrics> {
    let s = p.order_spacing;
    let ratio = fringe_ratio(p);
    let top = p.intensity.iter().fold(0.0_f64, |a, &b| a.max(b));
    let max_order = p.positions.last().map(|x| (x / s).floor() as i32).unwrap_or(0);
    (-max_order..=max_order)
        .filter_map(|m| {
            let (center, width) = peak_width(p, m as f64 * s)?;
            let i = p.positions.iter().position(|&x| x == center)?;
            if p.intensity[i] < 1e-3 * top {
                return None;
            }
            Some(PeakMetrics {
                order: m,
                center,
                width,
                contrast: contrast_in(&ratio, &p.positions, center - 0.5 * s, center + 0.5 * s),
            })
        })
        .collect()
}
