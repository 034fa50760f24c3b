//! Globally adaptive Gauss–Kronrod (7/15) quadrature and a nested 2D driver.

use crate::error::{Error, QuadratureFailure, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
    /// Equal pieces the range is cut into before adaptation starts.
    pub initial_pieces: usize,
    pub label: String,
}

impl QuadratureSettings {
    pub fn new(label: impl Into<String>, rel_tol: f64) -> Self {
        QuadratureSettings {
            rel_tol,
            abs_tol: 0.0,
            max_intervals: 4000,
            initial_pieces: 8,
            label: label.into(),
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_initial_pieces(mut self, n: usize) -> Self {
        self.initial_pieces = n.max(1);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, label: &str) -> Result<Piece> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    check(fc, center, label)?;
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        check(f1, center - dx, label)?;
        check(f2, center + dx, label)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (1.0_f64).min((200.0 * error / res_asc).powf(1.5));
    }
    let round_off = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(round_off);
    }
    Ok(Piece { a, b, value, error })
}

fn check(v: f64, x: f64, label: &str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite {
            label: label.to_string(),
            x,
            y: f64::NAN,
        })
    }
}

/// Integrate `f` over `[a, b]` until the summed error estimate meets the tolerance.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, settings: &QuadratureSettings) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let n0 = settings.initial_pieces.max(1);
    let mut pieces: Vec<Piece> = Vec::with_capacity(n0 * 4);
    let step = (b - a) / n0 as f64;
    for i in 0..n0 {
        let lo = a + step * i as f64;
        let hi = if i + 1 == n0 { b } else { a + step * (i + 1) as f64 };
        pieces.push(kronrod(&mut f, lo, hi, &settings.label)?);
    }
    let mut evaluations = 15 * n0;
    loop {
        let value: f64 = pieces.iter().map(|p| p.value).sum();
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        let target = settings.abs_tol.max(settings.rel_tol * value.abs());
        if error <= target {
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        let (worst_idx, worst) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, p)| (i, *p))
            .expect("at least one piece");
        let mid = 0.5 * (worst.a + worst.b);
        let resolvable = mid > worst.a.min(worst.b) && mid < worst.a.max(worst.b);
        if pieces.len() >= settings.max_intervals || !resolvable {
            return Err(Error::Quadrature(Box::new(QuadratureFailure {
                label: settings.label.clone(),
                estimate: value,
                error,
                tolerance: target,
                evaluations,
                worst_interval: (worst.a, worst.b),
                worst_error: worst.error,
            })));
        }
        let left = kronrod(&mut f, worst.a, mid, &settings.label)?;
        let right = kronrod(&mut f, mid, worst.b, &settings.label)?;
        evaluations += 30;
        pieces[worst_idx] = left;
        pieces.push(right);
    }
}

/// ∫ₐᵇ f(x) dx evaluated in the variable u = ln x, for ranges spanning many decades.
pub fn integrate_log<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, settings: &QuadratureSettings) -> Result<Integral> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain("lower limit", a, "logarithmic mapping needs positive limits"));
    }
    integrate(
        |u| {
            let x = u.exp();
            f(x) * x
        },
        a.ln(),
        b.ln(),
        settings,
    )
}

/// Nested ∫∫ f(x, y) dy dx with x outer over `[xa, xb]` and y inner over `inner_range(x)`.
///
/// Both levels use the logarithmic mapping when `log_outer` / `log_inner` is set. The inner
/// tolerance is a tenth of the outer one and the returned error adds the largest inner
/// relative error, scaled to the result, to the outer estimate.
#[allow(clippy::too_many_arguments)]
pub fn integrate_2d<F, R>(
    f: F,
    xa: f64,
    xb: f64,
    inner_range: R,
    log_outer: bool,
    log_inner: bool,
    settings: &QuadratureSettings,
) -> Result<Integral>
where
    F: Fn(f64, f64) -> f64,
    R: Fn(f64) -> (f64, f64),
{
    let mut inner_settings = settings.clone();
    inner_settings.rel_tol = settings.rel_tol * 0.1;
    inner_settings.abs_tol = 0.0;
    inner_settings.label = format!("{} (inner)", settings.label);
    let mut worst_inner_rel: f64 = 0.0;
    let mut inner_evals = 0usize;
    let mut failure: Option<Error> = None;

    let outer = |x: f64| -> f64 {
        if failure.is_some() {
            return 0.0;
        }
        let (ya, yb) = inner_range(x);
        if !(yb > ya) {
            return 0.0;
        }
        let g = |y: f64| f(x, y);
        let r = if log_inner {
            integrate_log(g, ya, yb, &inner_settings)
        } else {
            integrate(g, ya, yb, &inner_settings)
        };
        match r {
            Ok(i) => {
                inner_evals += i.evaluations;
                if i.value != 0.0 {
                    worst_inner_rel = worst_inner_rel.max(i.error / i.value.abs());
                }
                i.value
            }
            Err(Error::NonFinite { label, y, .. }) => {
                failure = Some(Error::NonFinite { label, x, y });
                0.0
            }
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };

    let result = {
        let mut outer = outer;
        if log_outer {
            integrate_log(&mut outer, xa, xb, settings)
        } else {
            integrate(&mut outer, xa, xb, settings)
        }
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let mut i = result?;
    i.error += worst_inner_rel * i.value.abs();
    i.evaluations += inner_evals;
    Ok(i)
}
