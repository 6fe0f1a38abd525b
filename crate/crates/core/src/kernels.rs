//! Heat kernels on the model geometries.
//!
//! All kernels are densities with respect to the Riemannian volume, written
//! as functions of the geodesic distance `d` from the base point (or of the
//! point `(x, y)` in the fundamental domain for flat tori) and time `t > 0`.
//! Two independent representations exist for the hyperbolic plane and for
//! flat tori; each is exposed so it can serve as an oracle for the other.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{HeatError, Result};
use crate::quad::{
    integrate_endpoint_invsqrt_offset, integrate_finite, integrate_halfline_decaying,
};
use crate::revolution::{heat_kernel_estimate, RadialProfile};
use crate::specfun::{conical_p_prime_with_tol, conical_p_with_tol, gamma, sphere_volume};

/// Smallest time accepted by [`sphere_kernel`].
pub const SPHERE_T_MIN: f64 = 1e-4;

/// Largest sphere dimension accepted by [`sphere_kernel`].
pub const SPHERE_MAX_DIM: usize = 10;

/// Largest number of spectral terms any zonal series may use.
pub const SERIES_BUDGET: usize = 2_000_000;

/// A kernel value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: f64,
    pub abs_error_estimate: f64,
}

impl KernelValue {
    fn exact(value: f64) -> Self {
        KernelValue {
            value,
            abs_error_estimate: 4.0 * f64::EPSILON * value.abs(),
        }
    }
}

/// Which representation of the hyperbolic-plane kernel to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HyperbolicRep {
    /// `∫_d^∞ β e^{−β²/4t} / √(cosh β − cosh d) dβ` closed form.
    Integral,
    /// Mehler–Fock integral over conical functions.
    Spectral,
}

/// Model geometries with a distinguished base point.
#[derive(Debug, Clone)]
pub enum ModelManifold {
    Euclidean(usize),
    Sphere(usize),
    HyperbolicPlane,
    Hyperbolic3,
    /// `ℝ² / (ℤ × ℓℤ)` with `ℓ ≥ 1`.
    FlatTorus {
        aspect: f64,
    },
    Revolution(RadialProfile),
}

impl ModelManifold {
    pub fn flat_torus(aspect: f64) -> Result<Self> {
        check_aspect(aspect)?;
        Ok(ModelManifold::FlatTorus { aspect })
    }

    pub fn sphere(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HeatError::domain("ModelManifold::sphere", "n must be >= 1"));
        }
        Ok(ModelManifold::Sphere(n))
    }

    /// Intrinsic dimension.
    pub fn dimension(&self) -> usize {
        match self {
            ModelManifold::Euclidean(n) | ModelManifold::Sphere(n) => *n,
            ModelManifold::HyperbolicPlane | ModelManifold::FlatTorus { .. } => 2,
            ModelManifold::Hyperbolic3 => 3,
            ModelManifold::Revolution(p) => p.intrinsic_dimension(),
        }
    }

    /// Largest geodesic distance from the base point along a radial geodesic
    /// (`∞` for noncompact models). For tori this is the inradius `1/2`.
    pub fn radial_extent(&self) -> f64 {
        match self {
            ModelManifold::Sphere(_) => PI,
            ModelManifold::Revolution(p) => p.length(),
            ModelManifold::FlatTorus { .. } => 0.5,
            _ => f64::INFINITY,
        }
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self, ModelManifold::FlatTorus { .. })
    }

    /// Heat kernel at geodesic distance `d` from the base point.
    ///
    /// Flat tori are not radially symmetric; for them `d` is measured along
    /// the first period direction.
    pub fn kernel(&self, d: f64, t: f64, tol: f64) -> Result<KernelValue> {
        match self {
            ModelManifold::Euclidean(n) => euclidean_kernel(*n, d, t),
            ModelManifold::Sphere(n) => sphere_kernel(*n, d, t, tol),
            ModelManifold::HyperbolicPlane => hyperbolic2_kernel_integral(d, t, tol),
            ModelManifold::Hyperbolic3 => hyperbolic3_kernel(d, t),
            ModelManifold::FlatTorus { aspect } => torus_kernel(*aspect, d, 0.0, t, tol),
            ModelManifold::Revolution(p) => {
                let eps = default_eps_list(p.length(), t);
                heat_kernel_estimate(p, d, t, &eps)
            }
        }
    }
}

/// Mollifier widths used when a revolution kernel is requested without an
/// explicit list: three halvings starting below both `L/20` and `√t/2`.
pub fn default_eps_list(length: f64, t: f64) -> Vec<f64> {
    let start = (length / 20.0).min(0.5 * t.sqrt());
    vec![start, start / 2.0, start / 4.0]
}

fn check_time(op: &'static str, t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(HeatError::domain(
            op,
            format!("time must be positive, got {t}"),
        ))
    }
}

fn check_distance(op: &'static str, d: f64) -> Result<()> {
    if d >= 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(HeatError::domain(
            op,
            format!("distance must be >= 0, got {d}"),
        ))
    }
}

fn check_tol(op: &'static str, tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(HeatError::domain(
            op,
            format!("tolerance must be positive, got {tol}"),
        ))
    }
}

fn check_aspect(aspect: f64) -> Result<()> {
    if aspect >= 1.0 && aspect.is_finite() {
        Ok(())
    } else {
        Err(HeatError::domain(
            "flat torus",
            format!("aspect must be >= 1, got {aspect}"),
        ))
    }
}

/// `(4πt)^{−n/2} exp(−d²/4t)`.
pub fn euclidean_kernel(n: usize, d: f64, t: f64) -> Result<KernelValue> {
    check_time("euclidean_kernel", t)?;
    check_distance("euclidean_kernel", d)?;
    if n == 0 {
        return Err(HeatError::domain(
            "euclidean_kernel",
            "dimension must be >= 1",
        ));
    }
    let v = (4.0 * PI * t).powf(-(n as f64) / 2.0) * (-d * d / (4.0 * t)).exp();
    Ok(KernelValue::exact(v))
}

/// Heat kernel of the unit sphere `Sⁿ` at polar angle `theta`.
///
/// Zonal expansion with the addition-theorem weights
/// `G = (1/|Sⁿ|) Σ_k dim(H_k) e^{−k(k+n−1)t} C_k^λ(cos θ) / C_k^λ(1)`, `λ = (n−1)/2`;
/// for `n = 2` this is `Σ (2k+1)/(4π) e^{−k(k+1)t} P_k(cos θ)`. The series is
/// truncated once a geometric bound on the remaining terms drops below `tol`.
pub fn sphere_kernel(n: usize, theta: f64, t: f64, tol: f64) -> Result<KernelValue> {
    check_time("sphere_kernel", t)?;
    check_tol("sphere_kernel", tol)?;
    if n == 0 || n > SPHERE_MAX_DIM {
        return Err(HeatError::domain(
            "sphere_kernel",
            format!("dimension must lie in 1..={SPHERE_MAX_DIM}, got {n}"),
        ));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(HeatError::domain(
            "sphere_kernel",
            format!("theta must lie in [0, π], got {theta}"),
        ));
    }
    if t < SPHERE_T_MIN {
        return Err(HeatError::TruncationBudget {
            op: "sphere_kernel",
            detail: format!("t = {t:e} is below t_min = {SPHERE_T_MIN:e}"),
        });
    }
    sphere_series(n, theta.cos(), t, tol, SERIES_BUDGET)
}

/// Zonal series for `Sⁿ` without the small-time guard; `max_terms` bounds the work.
pub(crate) fn sphere_series(
    n: usize,
    x: f64,
    t: f64,
    tol: f64,
    max_terms: usize,
) -> Result<KernelValue> {
    let nf = n as f64;
    let vol = sphere_volume(n);
    let lambda = (nf - 1.0) / 2.0;

    // c_prev/c_cur: normalized zonal polynomial Z_k(x) = C_k^λ(x)/C_k^λ(1)
    // (Chebyshev T_k when n = 1, Legendre P_k when n = 2).
    let mut z_prev = 1.0;
    let mut z_cur = x;
    let mut sum = 1.0 / vol;
    let mut abs_sum = sum;
    let mut prev_bound = f64::INFINITY;
    // dim(H_k) = (2k+n−1)(k+n−2)! / (k!(n−1)!), built incrementally from binom(k+n−2, k).
    let mut binom = 1.0;
    for k in 1..max_terms {
        let kf = k as f64;
        if k >= 2 {
            // Normalized recurrence: (k+2λ−1) Z_k = (2k+2λ−2) x Z_{k−1} − (k−1) Z_{k−2} for λ > 0,
            // and the Chebyshev recurrence when λ = 0.
            let z_next = if n == 1 {
                2.0 * x * z_cur - z_prev
            } else {
                ((2.0 * kf + 2.0 * lambda - 2.0) * x * z_cur - (kf - 1.0) * z_prev)
                    / (kf + 2.0 * lambda - 1.0)
            };
            z_prev = z_cur;
            z_cur = z_next;
        }
        let dim = if n == 1 {
            2.0
        } else {
            binom *= (kf + nf - 2.0) / kf;
            (2.0 * kf + nf - 1.0) / (nf - 1.0) * binom
        };
        let bound = dim * (-kf * (kf + nf - 1.0) * t).exp() / vol;
        let term = bound * z_cur;
        sum += term;
        abs_sum += term.abs();
        if prev_bound.is_finite() && bound < prev_bound {
            let ratio = bound / prev_bound;
            let tail = bound * ratio / (1.0 - ratio);
            if tail < 0.5 * tol || bound == 0.0 {
                return Ok(KernelValue {
                    value: sum,
                    abs_error_estimate: tail + 4.0 * f64::EPSILON * kf * abs_sum,
                });
            }
        }
        prev_bound = bound;
    }
    Err(HeatError::TruncationBudget {
        op: "sphere_series",
        detail: format!("more than {max_terms} terms needed at t = {t:e}"),
    })
}

/// Hyperbolic-plane kernel from
/// `√2 e^{−t/4} (4πt)^{−3/2} ∫_d^∞ β e^{−β²/4t} / √(cosh β − cosh d) dβ`.
///
/// The singular stretch `[d, d + w₁²]` goes through the `β = d + w²` substitution;
/// the rest is integrated on geometrically growing panels.
pub fn hyperbolic2_kernel_integral(d: f64, t: f64, tol: f64) -> Result<KernelValue> {
    check_time("hyperbolic2_kernel_integral", t)?;
    check_distance("hyperbolic2_kernel_integral", d)?;
    check_tol("hyperbolic2_kernel_integral", tol)?;
    let pref = SQRT_2 * (-t / 4.0).exp() * (4.0 * PI * t).powf(-1.5);
    let qtol = tol / pref;

    // δ = β − d; cosh β − cosh d = 2 sinh(d + δ/2) sinh(δ/2).
    let g = |delta: f64| {
        let beta = d + delta;
        let gap = 2.0 * (d + 0.5 * delta).sinh() * (0.5 * delta).sinh();
        beta * (-beta * beta / (4.0 * t)).exp() / gap.sqrt()
    };
    let split = (d * d + 16.0 * t).sqrt() - d;
    let near = integrate_endpoint_invsqrt_offset(g, d, d + split, 0.5 * qtol)?;
    let b0 = d + split;
    let scale = (2.0 * t / b0).min(b0);
    let far = integrate_halfline_decaying(|beta| g(beta - d), b0, scale, 0.5 * qtol)?;

    Ok(KernelValue {
        value: pref * (near.value + far.value),
        abs_error_estimate: pref * (near.abs_error_estimate + far.abs_error_estimate),
    })
}

/// Hyperbolic-plane kernel from the Mehler–Fock representation
/// `(1/2π) ∫_0^∞ e^{−(1/4+v²)t} P_{−1/2+iv}(cosh d) v tanh(πv) dv`.
pub fn hyperbolic2_kernel_spectral(d: f64, t: f64, tol: f64) -> Result<KernelValue> {
    check_time("hyperbolic2_kernel_spectral", t)?;
    check_distance("hyperbolic2_kernel_spectral", d)?;
    check_tol("hyperbolic2_kernel_spectral", tol)?;
    // ∫ e^{−v²t} v dv / 2π = 1/(4πt) bounds how inner errors propagate.
    let inner_tol = 0.05 * tol * 4.0 * PI * t;
    let failure = std::cell::Cell::new(None);
    let integrand = |v: f64| {
        let weight = (-(0.25 + v * v) * t).exp() * v * (PI * v).tanh() / (2.0 * PI);
        if weight == 0.0 {
            return 0.0;
        }
        match conical_p_with_tol(v, d, inner_tol) {
            Ok(p) => weight * p.value,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let scale = (1.0 / t.sqrt()).min(PI / d.max(1e-3)).min(2.0);
    let outer = integrate_halfline_decaying(integrand, 0.0, scale, 0.5 * tol);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let outer = outer?;
    Ok(KernelValue {
        value: outer.value,
        abs_error_estimate: outer.abs_error_estimate + 0.5 * tol,
    })
}

/// Hyperbolic-plane kernel in the requested representation.
pub fn hyperbolic2_kernel(rep: HyperbolicRep, d: f64, t: f64, tol: f64) -> Result<KernelValue> {
    match rep {
        HyperbolicRep::Integral => hyperbolic2_kernel_integral(d, t, tol),
        HyperbolicRep::Spectral => hyperbolic2_kernel_spectral(d, t, tol),
    }
}

/// `(4πt)^{−3/2} (d / sinh d) e^{−t − d²/4t}` on hyperbolic 3-space.
pub fn hyperbolic3_kernel(d: f64, t: f64) -> Result<KernelValue> {
    check_time("hyperbolic3_kernel", t)?;
    check_distance("hyperbolic3_kernel", d)?;
    let ratio = if d < 1e-4 {
        1.0 - d * d / 6.0
    } else {
        d / d.sinh()
    };
    let v = (4.0 * PI * t).powf(-1.5) * ratio * (-t - d * d / (4.0 * t)).exp();
    Ok(KernelValue::exact(v))
}

/// Time above which [`torus_kernel`] switches to the Fourier representation.
pub fn torus_switch_time(aspect: f64) -> f64 {
    0.2 * aspect.max(1.0).powi(2) / (4.0 * PI * PI)
}

// Σ_n exp(−(x − nP)²/4t) with all images within the Gaussian tail bound.
fn image_sum(x: f64, t: f64, period: f64, cutoff: f64) -> f64 {
    let reach = (4.0 * t * (-cutoff.ln())).sqrt() + period;
    let lo = ((x - reach) / period).floor() as i64;
    let hi = ((x + reach) / period).ceil() as i64;
    let center = (x / period).round() as i64;
    // Sum from the outside in so small images are accumulated first.
    let mut left = 0.0;
    for n in lo..center {
        let s = x - n as f64 * period;
        left += (-s * s / (4.0 * t)).exp();
    }
    let mut right = 0.0;
    for n in ((center + 1)..=hi).rev() {
        let s = x - n as f64 * period;
        right += (-s * s / (4.0 * t)).exp();
    }
    let s = x - center as f64 * period;
    (-s * s / (4.0 * t)).exp() + (left + right)
}

// 1 + 2 Σ_{k≥1} exp(−4π²k²t/P²) cos(2πkx/P).
fn fourier_sum(x: f64, t: f64, period: f64, cutoff: f64) -> f64 {
    let rate = 4.0 * PI * PI * t / (period * period);
    let kmax = ((-cutoff.ln()) / rate).sqrt().ceil() as i64 + 1;
    let mut s = 0.0;
    for k in (1..=kmax).rev() {
        let kf = k as f64;
        s += (-rate * kf * kf).exp() * (2.0 * PI * kf * x / period).cos();
    }
    1.0 + 2.0 * s
}

fn torus_cutoff(tol: f64) -> f64 {
    (tol * 1e-3).clamp(1e-300, 1e-18)
}

fn torus_args(aspect: f64, x: f64, y: f64, t: f64, tol: f64) -> Result<(f64, f64)> {
    check_aspect(aspect)?;
    check_time("torus_kernel", t)?;
    check_tol("torus_kernel", tol)?;
    if !x.is_finite() || !y.is_finite() {
        return Err(HeatError::domain("torus_kernel", "point must be finite"));
    }
    Ok((x.rem_euclid(1.0), y.rem_euclid(aspect)))
}

/// Flat-torus kernel via the Gaussian image sum
/// `(1/4πt) Σ_{n,m} exp(−((n−x)² + (ℓm−y)²)/4t)`.
pub fn torus_kernel_images(aspect: f64, x: f64, y: f64, t: f64, tol: f64) -> Result<KernelValue> {
    let (x, y) = torus_args(aspect, x, y, t, tol)?;
    let c = torus_cutoff(tol);
    let v = image_sum(x, t, 1.0, c) * image_sum(y, t, aspect, c) / (4.0 * PI * t);
    Ok(KernelValue {
        value: v,
        abs_error_estimate: 8.0 * f64::EPSILON * v + 4.0 * c * v,
    })
}

/// Flat-torus kernel via the Fourier series
/// `(1/ℓ) Σ_{n,m} exp(−4π²t(n² + m²/ℓ²)) cos(2πnx) cos(2πmy/ℓ)`.
pub fn torus_kernel_fourier(aspect: f64, x: f64, y: f64, t: f64, tol: f64) -> Result<KernelValue> {
    let (x, y) = torus_args(aspect, x, y, t, tol)?;
    let c = torus_cutoff(tol);
    let v = fourier_sum(x, t, 1.0, c) * fourier_sum(y, t, aspect, c) / aspect;
    let mags = (1.0 + 2.0 * c) / aspect;
    Ok(KernelValue {
        value: v,
        abs_error_estimate: 8.0 * f64::EPSILON * v.abs().max(mags) + 4.0 * c * mags,
    })
}

/// Flat-torus kernel at `(x, y)` (reduced into `[0,1) × [0,ℓ)`), choosing the
/// faster-converging representation from [`torus_switch_time`].
pub fn torus_kernel(aspect: f64, x: f64, y: f64, t: f64, tol: f64) -> Result<KernelValue> {
    if t <= torus_switch_time(aspect) {
        torus_kernel_images(aspect, x, y, t, tol)
    } else {
        torus_kernel_fourier(aspect, x, y, t, tol)
    }
}

/// Absolute tolerance used for kernel evaluations inside finite differences.
pub const DERIVATIVE_TOL: f64 = 1e-14;

/// Default finite-difference step `1e−4·max(1, d)`.
pub fn default_step(d: f64) -> f64 {
    1e-4 * d.max(1.0)
}

/// Central difference `(G(d+h) − G(d−h)) / 2h` of a radial kernel.
pub fn radial_derivative(model: &ModelManifold, d: f64, t: f64, h: Option<f64>) -> Result<f64> {
    if !model.is_radial() {
        return Err(HeatError::domain(
            "radial_derivative",
            "flat tori are not radial; use torus_ray_derivative",
        ));
    }
    let h = h.unwrap_or_else(|| default_step(d));
    if !(h > 0.0) || !(d - h > 0.0) {
        return Err(HeatError::domain(
            "radial_derivative",
            format!("need d − h > 0, got d = {d}, h = {h}"),
        ));
    }
    if let ModelManifold::Sphere(n) = model {
        // Allow stepping past the antipode: the zonal series is even about θ = π.
        let plus = sphere_kernel_unchecked_angle(*n, d + h, t)?;
        let minus = sphere_kernel_unchecked_angle(*n, d - h, t)?;
        return Ok((plus - minus) / (2.0 * h));
    }
    let plus = model.kernel(d + h, t, DERIVATIVE_TOL)?.value;
    let minus = model.kernel(d - h, t, DERIVATIVE_TOL)?.value;
    Ok((plus - minus) / (2.0 * h))
}

fn sphere_kernel_unchecked_angle(n: usize, theta: f64, t: f64) -> Result<f64> {
    check_time("sphere_kernel", t)?;
    if t < SPHERE_T_MIN {
        return Err(HeatError::TruncationBudget {
            op: "sphere_kernel",
            detail: format!("t = {t:e} is below t_min = {SPHERE_T_MIN:e}"),
        });
    }
    sphere_series(n, theta.cos(), t, DERIVATIVE_TOL, SERIES_BUDGET).map(|k| k.value)
}

/// Derivative of the torus kernel along the ray `s ↦ s·(cos φ, sin φ)` from the origin.
pub fn torus_ray_derivative(
    aspect: f64,
    direction: (f64, f64),
    s: f64,
    t: f64,
    h: Option<f64>,
) -> Result<f64> {
    let norm = direction.0.hypot(direction.1);
    if !(norm > 0.0) {
        return Err(HeatError::domain(
            "torus_ray_derivative",
            "direction must be nonzero",
        ));
    }
    let (ux, uy) = (direction.0 / norm, direction.1 / norm);
    let h = h.unwrap_or_else(|| default_step(s));
    let at = |r: f64| torus_kernel(aspect, r * ux, r * uy, t, DERIVATIVE_TOL).map(|k| k.value);
    Ok((at(s + h)? - at(s - h)?) / (2.0 * h))
}

/// Length of the ray from the origin in direction `direction` until it leaves
/// the centered fundamental domain `[−1/2, 1/2] × [−ℓ/2, ℓ/2]`.
pub fn torus_ray_length(aspect: f64, direction: (f64, f64)) -> f64 {
    let norm = direction.0.hypot(direction.1);
    let (ux, uy) = ((direction.0 / norm).abs(), (direction.1 / norm).abs());
    let sx = if ux > 0.0 { 0.5 / ux } else { f64::INFINITY };
    let sy = if uy > 0.0 {
        0.5 * aspect / uy
    } else {
        f64::INFINITY
    };
    sx.min(sy)
}

/// Total mass `∫_M G(p, y, t) dy`, by quadrature of the kernel against the
/// volume of geodesic spheres (or over the fundamental domain for tori).
pub fn total_mass(model: &ModelManifold, t: f64, tol: f64) -> Result<KernelValue> {
    check_time("total_mass", t)?;
    check_tol("total_mass", tol)?;
    match model {
        ModelManifold::Euclidean(n) => {
            let n = *n;
            let area = sphere_volume(n - 1);
            let f = |r: f64| {
                euclidean_kernel(n, r, t)
                    .map(|k| k.value)
                    .unwrap_or(f64::NAN)
                    * area
                    * r.powi(n as i32 - 1)
            };
            let q = integrate_halfline_decaying(f, 0.0, t.sqrt(), tol)?;
            Ok(KernelValue {
                value: q.value,
                abs_error_estimate: q.abs_error_estimate,
            })
        }
        ModelManifold::Sphere(n) => {
            let n = *n;
            let area = if n == 1 { 2.0 } else { sphere_volume(n - 1) };
            let inner = tol * 0.01 / (area.max(1.0) * PI);
            let failure = std::cell::Cell::new(None);
            let f = |th: f64| match sphere_series(n, th.cos(), t, inner, SERIES_BUDGET) {
                Ok(k) => k.value * area * th.sin().powi(n as i32 - 1),
                Err(e) => {
                    failure.set(Some(e));
                    f64::NAN
                }
            };
            let q = integrate_finite(f, 0.0, PI, tol);
            if let Some(e) = failure.take() {
                return Err(e);
            }
            let q = q?;
            Ok(KernelValue {
                value: q.value,
                abs_error_estimate: q.abs_error_estimate + 0.01 * tol,
            })
        }
        ModelManifold::HyperbolicPlane => hyperbolic2_mass(HyperbolicRep::Integral, t, tol),
        ModelManifold::Hyperbolic3 => {
            let f = |r: f64| {
                hyperbolic3_kernel(r, t)
                    .map(|k| k.value)
                    .unwrap_or(f64::NAN)
                    * 4.0
                    * PI
                    * r.sinh().powi(2)
            };
            let q = integrate_halfline_decaying(f, 0.0, t.sqrt(), tol)?;
            Ok(KernelValue {
                value: q.value,
                abs_error_estimate: q.abs_error_estimate,
            })
        }
        ModelManifold::FlatTorus { aspect } => torus_mass(*aspect, t, tol),
        ModelManifold::Revolution(p) => {
            let eps = default_eps_list(p.length(), t);
            crate::revolution::mass_estimate(p, t, eps[eps.len() - 1])
        }
    }
}

/// `∫_0^∞ G(d, t) 2π sinh d dd` for the hyperbolic plane in either representation.
pub fn hyperbolic2_mass(rep: HyperbolicRep, t: f64, tol: f64) -> Result<KernelValue> {
    check_time("hyperbolic2_mass", t)?;
    check_tol("hyperbolic2_mass", tol)?;
    if rep == HyperbolicRep::Spectral {
        return hyperbolic2_mass_spectral(t, tol);
    }
    let failure = std::cell::Cell::new(None);
    let f = |r: f64| {
        let w = 2.0 * PI * r.sinh();
        // Keep the kernel error small relative to what the weight amplifies.
        let ktol = 1e-3 * tol / (1.0 + w) / (1.0 + r);
        match hyperbolic2_kernel_integral(r, t, ktol) {
            Ok(k) => k.value * w,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let q = integrate_halfline_decaying(f, 0.0, t.sqrt(), tol);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let q = q?;
    Ok(KernelValue {
        value: q.value,
        abs_error_estimate: q.abs_error_estimate + 0.01 * tol,
    })
}

// Mass outside radius R under the profile (1/2t)√(r sinh r) e^{−r²/4t}, which
// dominates the large-distance behaviour of the ℍ² kernel times 2π sinh r.
fn hyperbolic2_mass_tail(radius: f64, t: f64) -> Result<f64> {
    let f = |r: f64| (r * r.sinh()).sqrt() * (-r * r / (4.0 * t)).exp() / (2.0 * t);
    Ok(integrate_halfline_decaying(
        f,
        radius,
        (2.0 * t / radius).min(1.0),
        1e-3 * f(radius).max(1e-300),
    )?
    .value)
}

// Mass inside radius R straight from the Mehler–Fock representation. Legendre's
// equation gives ∫_1^{cosh R} P_{−1/2+iv}(s) ds = −sinh²R P′(cosh R) / (1/4 + v²),
// so the radial integral collapses into a single spectral integral.
fn hyperbolic2_mass_spectral(t: f64, tol: f64) -> Result<KernelValue> {
    let mut radius = (4.0 * t.sqrt()).max(1.0);
    let mut tail = hyperbolic2_mass_tail(radius, t)?;
    while tail > 0.01 * tol {
        radius += 1.0;
        tail = hyperbolic2_mass_tail(radius, t)?;
    }
    let sh2 = radius.sinh().powi(2);
    let inner_tol = 0.05 * tol * t / sh2;
    let failure = std::cell::Cell::new(None);
    let integrand = |v: f64| {
        let lambda = 0.25 + v * v;
        let weight = (-lambda * t).exp() * v * (PI * v).tanh() / lambda;
        if weight == 0.0 {
            return 0.0;
        }
        match conical_p_prime_with_tol(v, radius, inner_tol) {
            Ok(p) => -weight * sh2 * p.value,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let scale = (1.0 / t.sqrt()).min(PI / radius).min(2.0);
    let q = integrate_halfline_decaying(integrand, 0.0, scale, 0.5 * tol);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let q = q?;
    Ok(KernelValue {
        value: q.value,
        abs_error_estimate: q.abs_error_estimate + 0.5 * tol + tail,
    })
}

fn torus_mass(aspect: f64, t: f64, tol: f64) -> Result<KernelValue> {
    check_aspect(aspect)?;
    let inner_tol = 0.25 * tol;
    let failure = std::cell::Cell::new(None);
    let outer = |x: f64| {
        let row = integrate_finite(
            |y| {
                torus_kernel(aspect, x, y, t, 1e-15)
                    .map(|k| k.value)
                    .unwrap_or(f64::NAN)
            },
            0.0,
            aspect,
            inner_tol,
        );
        match row {
            Ok(q) => q.value,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let q = integrate_finite(outer, 0.0, 1.0, 0.5 * tol);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let q = q?;
    Ok(KernelValue {
        value: q.value,
        abs_error_estimate: q.abs_error_estimate + inner_tol,
    })
}

/// Volume of `Sⁿ` re-exported for callers that normalize spherical data.
pub fn unit_sphere_volume(n: usize) -> f64 {
    sphere_volume(n)
}

/// `Γ` re-exported for callers that assemble Riesz constants.
pub fn gamma_fn(x: f64) -> f64 {
    gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_examples() {
        let t = 0.37;
        assert!((euclidean_kernel(2, 0.0, t).unwrap().value - 1.0 / (4.0 * PI * t)).abs() < 1e-15);
        let v = euclidean_kernel(3, 1.0, 1.0 / (4.0 * PI)).unwrap().value;
        assert!((v - (-PI).exp()).abs() < 1e-15);
        let q = integrate_finite(
            |x| euclidean_kernel(1, x.abs(), 0.3).unwrap().value,
            -20.0,
            20.0,
            1e-12,
        )
        .unwrap();
        assert!((q.value - 1.0).abs() < 1e-10);
        assert!(euclidean_kernel(2, 1.0, 0.0).is_err());
        assert!(euclidean_kernel(2, 1.0, -1.0).is_err());
    }

    #[test]
    fn sphere_large_time_is_uniform() {
        for i in 0..=10 {
            let th = PI * i as f64 / 10.0;
            let v = sphere_kernel(2, th, 50.0, 1e-14).unwrap().value;
            assert!((v - 1.0 / (4.0 * PI)).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_matches_direct_legendre_sum() {
        let (th, t) = (0.8_f64, 0.05);
        let direct: f64 = (0..400)
            .map(|k| {
                let kf = k as f64;
                (2.0 * kf + 1.0) / (4.0 * PI)
                    * (-kf * (kf + 1.0) * t).exp()
                    * crate::specfun::legendre_p(k, th.cos()).unwrap()
            })
            .sum();
        let v = sphere_kernel(2, th, t, 1e-14).unwrap().value;
        assert!((v - direct).abs() < 1e-13);
    }

    #[test]
    fn sphere_general_dimension_matches_gegenbauer() {
        // S³: weights (k+1) C_k^1(cos θ) / (2π²), eigenvalues k(k+2).
        let (th, t) = (1.1_f64, 0.2);
        let direct: f64 = (0..200)
            .map(|k| {
                let kf = k as f64;
                (kf + 1.0)
                    * (-kf * (kf + 2.0) * t).exp()
                    * crate::specfun::gegenbauer_c(k, 1.0, th.cos()).unwrap()
                    / (2.0 * PI * PI)
            })
            .sum();
        let v = sphere_kernel(3, th, t, 1e-14).unwrap().value;
        assert!((v - direct).abs() < 1e-13, "{v} vs {direct}");
        // S¹: wrapped Gaussian.
        let wrapped: f64 = (-20..=20)
            .map(|n| {
                euclidean_kernel(1, (th - 2.0 * PI * n as f64).abs(), t)
                    .unwrap()
                    .value
            })
            .sum();
        let v = sphere_kernel(1, th, t, 1e-14).unwrap().value;
        assert!((v - wrapped).abs() < 1e-13);
    }

    #[test]
    fn sphere_mass_and_short_time() {
        let m = total_mass(&ModelManifold::Sphere(2), 0.5, 1e-10).unwrap();
        assert!((m.value - 1.0).abs() < 1e-8);
        let t = 0.01;
        for i in 0..=10 {
            let th = 0.01 * i as f64;
            let v = sphere_kernel(2, th, t, 1e-12).unwrap().value;
            let ratio = v * 4.0 * PI * t * (th * th / (4.0 * t)).exp();
            assert!((0.95..=1.05).contains(&ratio), "θ={th}: {ratio}");
        }
    }

    #[test]
    fn sphere_rejects_tiny_time_and_bad_angle() {
        assert!(matches!(
            sphere_kernel(2, 0.1, 1e-5, 1e-10),
            Err(HeatError::TruncationBudget { .. })
        ));
        assert!(sphere_kernel(2, 3.5, 0.1, 1e-10).is_err());
        assert!(sphere_kernel(0, 0.5, 0.1, 1e-10).is_err());
    }

    #[test]
    fn hyperbolic2_representations_agree() {
        let a = hyperbolic2_kernel_integral(0.5, 1.0, 1e-12).unwrap().value;
        let b = hyperbolic2_kernel_spectral(0.5, 1.0, 1e-10).unwrap().value;
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        let a = hyperbolic2_kernel_integral(1e-4, 1.0, 1e-12).unwrap().value;
        let b = hyperbolic2_kernel_spectral(0.0, 1.0, 1e-10).unwrap().value;
        assert!((a - b).abs() < 1e-6);
        let a = hyperbolic2_kernel_integral(1.0, 2.0, 1e-12).unwrap().value;
        let b = hyperbolic2_kernel_spectral(1.0, 2.0, 1e-10).unwrap().value;
        assert!((a - b).abs() < 1e-8);
        assert!(hyperbolic2_kernel_spectral(3.0, 0.25, 1e-8).unwrap().value > 0.0);
    }

    #[test]
    fn hyperbolic2_decreases() {
        let near = hyperbolic2_kernel_integral(1.0, 0.5, 1e-10).unwrap().value;
        let far = hyperbolic2_kernel_integral(2.0, 0.5, 1e-10).unwrap().value;
        assert!(far < near);
    }

    #[test]
    fn hyperbolic3_examples() {
        let t = 0.7;
        let v = hyperbolic3_kernel(0.0, t).unwrap().value;
        assert!((v - (4.0 * PI * t).powf(-1.5) * (-t).exp()).abs() < 1e-16);
        let m = total_mass(&ModelManifold::Hyperbolic3, 1.0, 1e-11).unwrap();
        assert!((m.value - 1.0).abs() < 1e-8);
        assert!(
            hyperbolic3_kernel(2.0, 1.0).unwrap().value
                < hyperbolic3_kernel(1.0, 1.0).unwrap().value
        );
    }

    #[test]
    fn torus_examples() {
        let a = torus_kernel_images(2.0, 0.1, 0.1, 0.05, 1e-14)
            .unwrap()
            .value;
        let b = torus_kernel_fourier(2.0, 0.1, 0.1, 0.05, 1e-14)
            .unwrap()
            .value;
        assert!((a - b).abs() < 1e-12);
        let t = 0.001;
        let v = torus_kernel(2.0, 0.0, 0.0, t, 1e-14).unwrap().value;
        assert!((v * 4.0 * PI * t - 1.0).abs() < 1e-12);
        for aspect in [1.0, 2.0] {
            let m = total_mass(&ModelManifold::FlatTorus { aspect }, 0.05, 1e-11).unwrap();
            assert!((m.value - 1.0).abs() < 1e-10, "{}", m.value);
        }
        assert!(torus_kernel(0.5, 0.1, 0.1, 0.1, 1e-10).is_err());
    }

    #[test]
    fn radial_derivative_examples() {
        let g = euclidean_kernel(3, 1.0, 1.0).unwrap().value;
        let d = radial_derivative(&ModelManifold::Euclidean(3), 1.0, 1.0, None).unwrap();
        assert!(((d + 0.5 * g) / (0.5 * g)).abs() < 1e-6);
        let d = radial_derivative(&ModelManifold::Sphere(2), PI - 1e-6, 0.5, None).unwrap();
        assert!(d.abs() < 1e-4);
        assert!(radial_derivative(&ModelManifold::Sphere(2), 1.0, 0.1, None).unwrap() < 0.0);
        assert!(
            radial_derivative(&ModelManifold::FlatTorus { aspect: 2.0 }, 0.2, 0.1, None).is_err()
        );
    }
}
