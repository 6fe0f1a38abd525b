//! Adaptive quadrature.
//!
//! Every routine here is built on one 7-point Gauss / 15-point Kronrod pair
//! applied with global adaptive bisection: the interval with the largest
//! error estimate is split until the summed estimate meets the tolerance.
//! The semi-infinite drivers chop `[a, ∞)` into panels and integrate each
//! panel with the finite engine.
//!
//! Tolerances are absolute. A tolerance below the rounding floor of the
//! integrand (`64 ε ∫|f|`) is raised to that floor, since no rule can do better.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{HeatError, Result};

/// Default bisection budget for [`integrate_finite`].
pub const MAX_SUBDIVISIONS: usize = 4000;

/// Panel budget for the half-line drivers.
pub const MAX_PANELS: usize = 4000;

/// Outcome of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[allow(clippy::excessive_precision)]
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

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    l1: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    let fc = eval(f, center)?;
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();

    #[allow(clippy::needless_range_loop)]
    for j in 0..3 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_k - res_g) * half;
    let scale = half.abs();
    Ok(Segment {
        a,
        b,
        value: res_k * half,
        error: rescale_error(err, res_abs * scale, res_asc * scale),
        l1: res_abs * scale,
    })
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(HeatError::domain(
            "quadrature",
            format!("integrand is not finite at x = {x:e}"),
        ))
    }
}

fn roundoff_floor(l1: f64) -> f64 {
    64.0 * f64::EPSILON * l1
}

/// Full output of the finite engine, including an estimate of `∫|f|`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Detailed {
    pub result: QuadResult,
    pub l1: f64,
}

pub(crate) fn integrate_finite_detailed<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_subdivisions: usize,
) -> Result<Detailed> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(HeatError::domain(
            "integrate_finite",
            format!("need finite a < b, got [{a}, {b}]"),
        ));
    }
    if !(tol > 0.0) {
        return Err(HeatError::domain(
            "integrate_finite",
            format!("tolerance must be positive, got {tol}"),
        ));
    }

    let first = gk15(f, a, b)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    let mut total_err = first.error;
    let mut total_l1 = first.l1;
    heap.push(first);

    let mut exhausted = false;
    while total_err > tol.max(roundoff_floor(total_l1)) {
        if heap.len() >= max_subdivisions {
            exhausted = true;
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            heap.push(worst);
            exhausted = true;
            break;
        }
        let left = gk15(f, worst.a, mid)?;
        let right = gk15(f, mid, worst.b)?;
        evaluations += 30;
        total_err += left.error + right.error - worst.error;
        total_l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
    }

    // Resum in positional order so the result does not depend on heap layout.
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = segments.iter().map(|s| s.value).sum();
    let error: f64 = segments.iter().map(|s| s.error).sum();
    let l1: f64 = segments.iter().map(|s| s.l1).sum();

    if exhausted && error > tol.max(roundoff_floor(l1)) {
        return Err(HeatError::NonConvergence {
            estimate: value,
            abs_error_estimate: error,
            tolerance: tol,
        });
    }
    Ok(Detailed {
        result: QuadResult {
            value,
            abs_error_estimate: error,
            evaluations,
        },
        l1,
    })
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// ```
/// use heatkern::quad::integrate_finite;
/// let r = integrate_finite(|x: f64| x.cos(), 0.0, std::f64::consts::FRAC_PI_2, 1e-12).unwrap();
/// assert!((r.value - 1.0).abs() < 1e-12);
/// ```
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    integrate_finite_detailed(&f, a, b, tol, MAX_SUBDIVISIONS).map(|d| d.result)
}

/// Integrates an exponentially decaying `f` over `[a, ∞)`.
///
/// Panels start at width `decay_scale` and double; integration stops once two
/// consecutive panels carry `∫|f|` below `tol / 10`.
pub fn integrate_halfline_decaying<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    decay_scale: f64,
    tol: f64,
) -> Result<QuadResult> {
    integrate_halfline_panels(f, a, decay_scale, 2.0, tol)
}

/// Panelized half-line integration with first panel width `width` and
/// geometric width `growth` (use `1.0` for constant panels).
pub fn integrate_halfline_panels<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    width: f64,
    growth: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !(width > 0.0) || !(growth >= 1.0) || !a.is_finite() {
        return Err(HeatError::domain(
            "integrate_halfline",
            format!("bad panel layout: a = {a}, width = {width}, growth = {growth}"),
        ));
    }
    if !(tol > 0.0) {
        return Err(HeatError::domain(
            "integrate_halfline",
            format!("tolerance must be positive, got {tol}"),
        ));
    }
    let share = 3.0 / (std::f64::consts::PI * std::f64::consts::PI);
    let mut lo = a;
    let mut w = width;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut quiet = 0;
    for k in 0..MAX_PANELS {
        let hi = lo + w;
        let panel_tol = tol * share / ((k + 1) as f64).powi(2);
        let d = integrate_finite_detailed(&f, lo, hi, panel_tol, MAX_SUBDIVISIONS)?;
        value += d.result.value;
        error += d.result.abs_error_estimate;
        evaluations += d.result.evaluations;
        if d.l1 <= 0.1 * tol {
            quiet += 1;
            if quiet >= 2 {
                // The last quiet panel stands in for the truncated tail.
                error += d.l1;
                return Ok(QuadResult {
                    value,
                    abs_error_estimate: error,
                    evaluations,
                });
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        w *= growth;
    }
    Err(HeatError::NonConvergence {
        estimate: value,
        abs_error_estimate: f64::INFINITY,
        tolerance: tol,
    })
}

/// Half-line integration of an oscillatory integrand whose oscillation has
/// (asymptotically) constant half-period `half_period`.
///
/// Integrates over consecutive half-period panels and accelerates the
/// alternating partial sums by repeated averaging. Suited to integrands with
/// slowly (even algebraically) decaying envelopes.
pub fn integrate_halfline_oscillatory<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    half_period: f64,
    tol: f64,
) -> Result<QuadResult> {
    const DEPTH: usize = 12;
    if !(half_period > 0.0) || !a.is_finite() || !(tol > 0.0) {
        return Err(HeatError::domain(
            "integrate_halfline_oscillatory",
            format!("bad arguments: a = {a}, half_period = {half_period}, tol = {tol}"),
        ));
    }
    let panel_tol = 0.05 * tol;
    let mut partial = Vec::new();
    let mut sum = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut accelerated: Vec<f64> = Vec::new();
    for k in 0..MAX_PANELS {
        let lo = a + k as f64 * half_period;
        let d = integrate_finite_detailed(&f, lo, lo + half_period, panel_tol, MAX_SUBDIVISIONS)?;
        sum += d.result.value;
        error += d.result.abs_error_estimate;
        evaluations += d.result.evaluations;
        partial.push(sum);

        if d.l1 <= 0.01 * tol && k >= 1 {
            return Ok(QuadResult {
                value: sum,
                abs_error_estimate: error + d.l1,
                evaluations,
            });
        }
        if partial.len() >= DEPTH {
            let mut row: Vec<f64> = partial[partial.len() - DEPTH..].to_vec();
            while row.len() > 1 {
                row = row.windows(2).map(|p| 0.5 * (p[0] + p[1])).collect();
            }
            accelerated.push(row[0]);
            let n = accelerated.len();
            if n >= 3 {
                let d1 = (accelerated[n - 1] - accelerated[n - 2]).abs();
                let d2 = (accelerated[n - 2] - accelerated[n - 3]).abs();
                let change = d1.max(d2);
                // Per-panel error estimates are dominated by the panel budget
                // itself once the tail is small; the accelerated value inherits
                // them through the averaging weights, which sum to one.
                if change <= 0.25 * tol {
                    return Ok(QuadResult {
                        value: accelerated[n - 1],
                        abs_error_estimate: error.min(tol * 0.5) + change,
                        evaluations,
                    });
                }
            }
        }
    }
    Err(HeatError::NonConvergence {
        estimate: accelerated.last().copied().unwrap_or(sum),
        abs_error_estimate: f64::INFINITY,
        tolerance: tol,
    })
}

/// Integrates `f` over `[a, b]` where `f(x)·√(x − a)` stays bounded near `a`.
///
/// Substitutes `x = a + w²`, so the integrand becomes `2w·f(a + w²)`, which is
/// regular at `w = 0`.
pub fn integrate_endpoint_invsqrt<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadResult> {
    integrate_endpoint_invsqrt_offset(|delta| f(a + delta), a, b, tol)
}

/// Like [`integrate_endpoint_invsqrt`] but `g` receives the offset `x − a`
/// directly, so integrands such as `1/√(x − a)` keep full precision when the
/// offset drops below the spacing of floats near `a`.
pub fn integrate_endpoint_invsqrt_offset<G: Fn(f64) -> f64>(
    g: G,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !(a < b) {
        return Err(HeatError::domain(
            "integrate_endpoint_invsqrt",
            format!("need a < b, got [{a}, {b}]"),
        ));
    }
    let w_max = (b - a).sqrt();
    integrate_finite(|w| 2.0 * w * g(w * w), 0.0, w_max, tol)
}
