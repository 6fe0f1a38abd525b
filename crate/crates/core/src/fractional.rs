//! Fractional powers of the Laplacian on spheres and the positivity
//! statements built on completely monotonic functions.
//!
//! Everything here is zonal: functions of the polar angle on `S²` expanded in
//! Legendre polynomials, so `(−Δ)^α` acts diagonally by `(k(k+1))^α`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{HeatError, Result};
use crate::kernels::{sphere_series, KernelValue};
use crate::quad::{
    integrate_finite, integrate_halfline_decaying, integrate_halfline_oscillatory, QuadResult,
};
use crate::report::{CheckReport, GridSummary};
use crate::specfun::{
    conical_p_prime_with_tol, gamma, gauss_legendre, sphere_volume, LegendreIter,
};

/// Smallest distance accepted by [`subordinate_kernel`].
pub const D_MIN: f64 = 0.05;

/// Term budget for the zonal series in this module.
pub const TERM_BUDGET: usize = 1_000_000;

fn check_alpha(op: &'static str, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(HeatError::domain(
            op,
            format!("alpha must lie in (0, 1), got {alpha}"),
        ))
    }
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Subordinated kernel on `Sⁿ` at distance `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FracKernelValue {
    pub alpha: f64,
    pub d: f64,
    /// `K(d) = ∫_0^∞ G(d, t) t^{−1−α} dt`.
    pub k: f64,
    /// `K(d)·d^{n+2α}` divided by its Euclidean value, so that it tends to 1 as `d → 0`.
    pub k_norm: f64,
    pub abs_error_estimate: f64,
}

/// `∫_0^∞ (4πt)^{−n/2} e^{−d²/4t} t^{−1−α} dt · d^{n+2α} = 4^α Γ(n/2+α) / π^{n/2}`.
pub fn euclidean_subordination_constant(n: usize, alpha: f64) -> f64 {
    let h = n as f64 / 2.0;
    4f64.powf(alpha) * gamma(h + alpha) / PI.powf(h)
}

/// `K(d) = ∫_0^∞ G_{Sⁿ}(d, t) t^{−1−α} dt` with relative tolerance `tol`.
///
/// The integral is split at `T₀ = d²/4`. Above `T₀` the constant mode is
/// integrated in closed form and the rest decays like `e^{−nt}`; below, the
/// heat kernel is evaluated down to `t_min = d²/(5 ln(1/tol))`, under which
/// the Gaussian factor makes the omitted piece smaller than `tol`.
pub fn subordinate_kernel(n: usize, alpha: f64, d: f64, tol: f64) -> Result<FracKernelValue> {
    check_alpha("subordinate_kernel", alpha)?;
    if n == 0 || n > crate::kernels::SPHERE_MAX_DIM {
        return Err(HeatError::domain(
            "subordinate_kernel",
            "unsupported sphere dimension",
        ));
    }
    if !(d >= D_MIN) || !(d < PI) {
        return Err(HeatError::Precondition(format!(
            "subordinate_kernel needs {D_MIN} <= d < pi, got {d}"
        )));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(HeatError::domain(
            "subordinate_kernel",
            "tol must lie in (0, 1)",
        ));
    }
    let nf = n as f64;
    let vol = sphere_volume(n);
    let x = d.cos();
    let c_euc = euclidean_subordination_constant(n, alpha);
    let scale = c_euc * d.powf(-nf - 2.0 * alpha);
    let abs_tol = tol * scale;

    let failure = std::cell::Cell::new(None);
    let kernel = |t: f64| match sphere_series(n, x, t, 1e-17, TERM_BUDGET) {
        Ok(k) => k.value,
        Err(e) => {
            failure.set(Some(e));
            f64::NAN
        }
    };

    let t0 = d * d / 4.0;
    let t_min = d * d / (5.0 * (1.0 / tol).ln());
    let lower = integrate_finite(
        |t| kernel(t) * t.powf(-1.0 - alpha),
        t_min,
        t0,
        0.4 * abs_tol,
    );
    let upper = integrate_halfline_decaying(
        |t| (kernel(t) - 1.0 / vol) * t.powf(-1.0 - alpha),
        t0,
        1.0 / nf,
        0.4 * abs_tol,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let (lower, upper) = (lower?, upper?);
    let constant = t0.powf(-alpha) / (alpha * vol);
    // On [0, t_min] the integrand increases, and G ≤ 2(4πt)^{−n/2} e^{−d²/4t} there.
    let omitted = t_min
        * 2.0
        * (4.0 * PI * t_min).powf(-nf / 2.0)
        * (-d * d / (4.0 * t_min)).exp()
        * t_min.powf(-1.0 - alpha);
    let k = lower.value + upper.value + constant;
    Ok(FracKernelValue {
        alpha,
        d,
        k,
        k_norm: k * d.powf(nf + 2.0 * alpha) / c_euc,
        abs_error_estimate: lower.abs_error_estimate + upper.abs_error_estimate + omitted,
    })
}

/// `∫_U^∞ e^{−t u^α} du` bounded by integrating by parts once.
fn stretched_tail_bound(alpha: f64, t: f64, u: f64) -> f64 {
    let a = alpha * t * u.powf(alpha);
    let denom = 1.0 - (1.0 - alpha) / a;
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    (-t * u.powf(alpha)).exp() * u.powf(1.0 - alpha) / (alpha * t) / denom
}

/// Smallest `t` for which [`frac_heat_kernel`] fits in [`TERM_BUDGET`] terms at tolerance `tol`.
pub fn frac_t_min(alpha: f64, tol: f64) -> f64 {
    let b = TERM_BUDGET as f64;
    let u = b * (b + 1.0);
    let ua = u.powf(alpha);
    let mut t: f64 = 1.0;
    for _ in 0..20 {
        let need =
            ((1.0 - alpha) * u.ln() - alpha.ln() - t.ln() - (tol * 4.0 * PI / 1.5).ln()).max(1.0);
        t = need / ua;
    }
    1.1 * t
}

/// Fractional heat kernel `Σ (2k+1)/(4π) e^{−t(k(k+1))^α} P_k(cos θ)` on `S²`.
pub fn frac_heat_kernel(alpha: f64, theta: f64, t: f64, tol: f64) -> Result<KernelValue> {
    check_alpha("frac_heat_kernel", alpha)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(HeatError::domain("frac_heat_kernel", "t must be positive"));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(HeatError::domain(
            "frac_heat_kernel",
            "theta must lie in [0, pi]",
        ));
    }
    if !(tol > 0.0) {
        return Err(HeatError::domain(
            "frac_heat_kernel",
            "tol must be positive",
        ));
    }
    let t_min = frac_t_min(alpha, tol);
    if t < t_min {
        return Err(HeatError::TruncationBudget {
            op: "frac_heat_kernel",
            detail: format!("t = {t:e} is below t_min(alpha = {alpha}) = {t_min:e}"),
        });
    }
    let mut sum = Compensated::default();
    let mut abs_sum = 0.0;
    for (k, (p, _)) in LegendreIter::new(theta.cos()).enumerate().take(TERM_BUDGET) {
        let kf = k as f64;
        let u = kf * (kf + 1.0);
        let term = (2.0 * kf + 1.0) / (4.0 * PI) * (-t * u.powf(alpha)).exp() * p;
        sum.add(term);
        abs_sum += term.abs();
        if k >= 1 {
            let tail = 1.5 / (4.0 * PI) * stretched_tail_bound(alpha, t, u);
            if tail < tol {
                return Ok(KernelValue {
                    value: sum.value(),
                    abs_error_estimate: tail + 4.0 * f64::EPSILON * abs_sum,
                });
            }
        }
    }
    Err(HeatError::TruncationBudget {
        op: "frac_heat_kernel",
        detail: format!("more than {TERM_BUDGET} terms needed"),
    })
}

/// Outcome of [`completely_monotonic_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmReport {
    pub pass: bool,
    pub orders: usize,
    /// Lowest derivative order at which a sign violation was seen.
    pub first_failing_order: Option<usize>,
    /// Smallest `(−1)^k ∇_h^k F(x)` over all orders and grid points.
    pub worst_margin: f64,
    pub grid: GridSummary,
    pub h: f64,
}

impl CmReport {
    pub fn to_check_report(&self) -> CheckReport {
        CheckReport::new("cm-check", self.grid, self.worst_margin, self.pass)
            .param("orders", self.orders)
            .param("h", self.h)
            .param(
                "first_failing_order",
                self.first_failing_order.map(|k| k as u64),
            )
            .param("method", "backward differences (finite-order surrogate)")
    }
}

/// Sign test `(−1)^k ∇_h^k F(x) ≥ −tol_k` for `1 ≤ k ≤ orders` on `grid`,
/// with `∇_h^k F(x) = Σ_j (−1)^j C(k,j) F(x − jh)` and `tol_k` the rounding
/// level `4ε·2^k·max|F|` of the stencil. This is only a finite surrogate for
/// complete monotonicity, which constrains derivatives of every order.
pub fn completely_monotonic_check(
    f: &dyn Fn(f64) -> f64,
    orders: usize,
    grid: &[f64],
    h: f64,
) -> CmReport {
    let orders = orders.min(8);
    let mut worst = f64::INFINITY;
    let mut first_fail: Option<usize> = None;
    let valid = h > 0.0 && grid.iter().all(|&x| x - orders as f64 * h > 0.0);
    if valid {
        for &x in grid {
            let vals: Vec<f64> = (0..=orders).map(|j| f(x - j as f64 * h)).collect();
            let fmax = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if vals.iter().any(|v| !v.is_finite()) || vals[0] < 0.0 {
                // Order 0: F itself must be finite and nonnegative.
                first_fail = Some(0);
                worst = f64::NEG_INFINITY;
                continue;
            }
            for k in 1..=orders {
                let mut diff = 0.0;
                let mut binom = 1.0;
                for (j, v) in vals.iter().enumerate().take(k + 1) {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    diff += sign * binom * v;
                    binom = binom * (k - j) as f64 / (j + 1) as f64;
                }
                let signed = if k % 2 == 0 { diff } else { -diff };
                worst = worst.min(signed);
                let tol = 4.0 * f64::EPSILON * 2f64.powi(k as i32) * fmax;
                if signed < -tol {
                    first_fail = Some(first_fail.map_or(k, |f| f.min(k)));
                }
            }
        }
    }
    CmReport {
        pass: valid && first_fail.is_none(),
        orders,
        first_failing_order: first_fail,
        worst_margin: if valid { worst } else { f64::NEG_INFINITY },
        grid: GridSummary::of(grid),
        h,
    }
}

/// Log-spaced grid on `[0.5, 50]` with step `0.05`, used for CM preconditions.
pub fn default_cm_grid() -> (Vec<f64>, f64) {
    let n = 100;
    let grid = (0..n)
        .map(|i| 0.5 * 100f64.powf(i as f64 / (n - 1) as f64))
        .collect();
    (grid, 0.05)
}

/// A function claimed completely monotonic with decay `F(x) = O(x^{−σ})`.
#[derive(Clone)]
pub struct CMFunction {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub sigma: f64,
    pub orders: usize,
    pub label: String,
    check: Arc<OnceLock<CmReport>>,
}

impl std::fmt::Debug for CMFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CMFunction")
            .field("label", &self.label)
            .field("sigma", &self.sigma)
            .field("orders", &self.orders)
            .finish()
    }
}

impl CMFunction {
    pub fn new(
        label: &str,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        sigma: f64,
        orders: usize,
    ) -> Self {
        CMFunction {
            f: Arc::new(f),
            sigma,
            orders: orders.min(8),
            label: label.to_string(),
            check: Arc::new(OnceLock::new()),
        }
    }

    /// `e^{−x t₀}` (decays faster than any power; `σ` is recorded as 8).
    pub fn exponential(t0: f64) -> Self {
        CMFunction::new(&format!("exp(-{t0}x)"), move |x| (-x * t0).exp(), 8.0, 8)
    }

    /// `e^{−x^a}` for `0 < a ≤ 1`.
    pub fn stretched_exponential(a: f64) -> Self {
        CMFunction::new(&format!("exp(-x^{a})"), move |x| (-x.powf(a)).exp(), 8.0, 8)
    }

    /// `(c + x)^{−p}`.
    pub fn inverse_power(c: f64, p: f64) -> Self {
        CMFunction::new(&format!("({c}+x)^-{p}"), move |x| (c + x).powf(-p), p, 8)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// The CM check on [`default_cm_grid`], computed once.
    pub fn check(&self) -> &CmReport {
        self.check.get_or_init(|| {
            let (grid, h) = default_cm_grid();
            completely_monotonic_check(&*self.f, self.orders, &grid, h)
        })
    }

    fn require(&self, op: &str, sigma_min: f64) -> Result<()> {
        if !(self.sigma > sigma_min) {
            return Err(HeatError::Precondition(format!(
                "{op} needs decay exponent sigma > {sigma_min}, got {}",
                self.sigma
            )));
        }
        let report = self.check();
        if !report.pass {
            return Err(HeatError::Precondition(format!(
                "{} failed the complete-monotonicity check (first failing order {:?})",
                self.label, report.first_failing_order
            )));
        }
        Ok(())
    }
}

/// Partial sum with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// `Σ_{n=0}^{K} (2n+1) P_n′(x) F(n(n+1))`.
///
/// With `k_max = None` the cutoff is the first `K` at which the tail bound
/// `F(U) U² / (2(σ−2))`, `U = K(K+1)`, drops below `tol`; it uses
/// `|P_n′| ≤ n(n+1)/2` and `F(u) ≤ F(U)(U/u)^σ` beyond `U`.
pub fn legendre_cm_sum(
    f: &CMFunction,
    x: f64,
    k_max: Option<usize>,
    tol: f64,
) -> Result<SeriesValue> {
    f.require("legendre_cm_sum", 2.0)?;
    if !(x > -1.0 && x < 1.0) {
        return Err(HeatError::domain(
            "legendre_cm_sum",
            format!("x must lie in (-1, 1), got {x}"),
        ));
    }
    let tail_at = |n: usize| {
        let u = (n * (n + 1)) as f64;
        1.5 * f.eval(u) * u * u / (2.0 * (f.sigma - 2.0))
    };
    let limit = k_max.unwrap_or(TERM_BUDGET);
    let mut sum = Compensated::default();
    for (n, (_, dp)) in LegendreIter::new(x).enumerate().take(limit + 1) {
        let u = (n * (n + 1)) as f64;
        sum.add((2 * n + 1) as f64 * dp * f.eval(u));
        if k_max.is_none() && n >= 8 {
            let tail = tail_at(n);
            if tail < tol {
                return Ok(SeriesValue {
                    value: sum.value(),
                    tail_bound: tail,
                    terms: n + 1,
                });
            }
        }
    }
    if k_max.is_none() {
        return Err(HeatError::TruncationBudget {
            op: "legendre_cm_sum",
            detail: format!("tail above {tol:e} after {TERM_BUDGET} terms"),
        });
    }
    Ok(SeriesValue {
        value: sum.value(),
        tail_bound: tail_at(limit.max(1)),
        terms: limit + 1,
    })
}

/// `−∫_0^∞ F(1/4+v²) P′_{−1/2+iv}(cosh r) v tanh(πv) dv`, with `P′` the
/// derivative in the argument `cosh r`.
///
/// The sign makes the value positive: with `F(x) = e^{−xt}` it equals
/// `−2π ∂_r H(r, t) / sinh r` for the hyperbolic-plane heat kernel `H`,
/// which decreases in `r`. Beyond `v₀` the integrand oscillates with
/// half-period `π/r` and is summed panel by panel with acceleration.
pub fn mehler_cm_integral(f: &CMFunction, r: f64, tol: f64) -> Result<QuadResult> {
    f.require("mehler_cm_integral", 1.25)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(HeatError::domain(
            "mehler_cm_integral",
            format!("r must be positive, got {r}"),
        ));
    }
    if !(tol > 0.0) {
        return Err(HeatError::domain(
            "mehler_cm_integral",
            "tol must be positive",
        ));
    }
    let inner = 1e-3 * tol;
    let failure = std::cell::Cell::new(None);
    let g = |v: f64| {
        let w = f.eval(0.25 + v * v) * v * (PI * v).tanh();
        if w == 0.0 {
            return 0.0;
        }
        match conical_p_prime_with_tol(v, r, inner) {
            Ok(p) => -w * p.value,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let v0 = (8.0 / r).max(4.0);
    let head = integrate_finite(g, 0.0, v0, 0.5 * tol);
    let tail = integrate_halfline_oscillatory(g, v0, PI / r, 0.5 * tol);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let (head, tail) = (head?, tail?);
    Ok(QuadResult {
        value: head.value + tail.value,
        abs_error_estimate: head.abs_error_estimate + tail.abs_error_estimate,
        evaluations: head.evaluations + tail.evaluations,
    })
}

/// Partial sum `Σ_{n=0}^{N} P_n(x)` of Legendre polynomials.
pub fn fejer_sum(n: usize, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(HeatError::domain(
            "fejer_sum",
            format!("x must lie in [-1, 1], got {x}"),
        ));
    }
    Ok(LegendreIter::new(x).take(n + 1).map(|(p, _)| p).sum())
}

/// Zonal function `θ ↦ Σ_k a_k P_k(cos θ)` on `S²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZonalFunction {
    coeffs: Vec<f64>,
}

impl ZonalFunction {
    pub fn new(coeffs: Vec<f64>) -> Self {
        ZonalFunction { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        ZonalFunction::new(vec![c])
    }

    /// `P_k(cos θ)`.
    pub fn legendre(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        ZonalFunction::new(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn scaled(&self, c: f64) -> Self {
        ZonalFunction::new(self.coeffs.iter().map(|a| c * a).collect())
    }

    /// Value at `x = cos θ`.
    pub fn eval_x(&self, x: f64) -> f64 {
        let mut s = Compensated::default();
        for (a, (p, _)) in self.coeffs.iter().zip(LegendreIter::new(x)) {
            s.add(a * p);
        }
        s.value()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.eval_x(theta.cos())
    }

    /// Values on a θ-grid.
    pub fn tabulate(&self, thetas: &[f64]) -> Vec<f64> {
        thetas.iter().map(|&t| self.eval(t)).collect()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, a| m.max(a.abs()))
    }
}

/// `(−Δ)^α` on zonal functions: `a_k ↦ (k(k+1))^α a_k`. Accepts `α ∈ (0, 1]`.
pub fn frac_apply(f: &ZonalFunction, alpha: f64) -> Result<ZonalFunction> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(HeatError::domain(
            "frac_apply",
            format!("alpha must lie in (0, 1], got {alpha}"),
        ));
    }
    Ok(ZonalFunction::new(
        f.coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let kf = k as f64;
                if k == 0 {
                    0.0
                } else {
                    (kf * (kf + 1.0)).powf(alpha) * a
                }
            })
            .collect(),
    ))
}

/// Residual allowed when projecting `f²` back onto Legendre polynomials.
pub const PROJECTION_LIMIT: f64 = 1e-10;

/// Legendre coefficients of `f²` by Gauss–Legendre projection with
/// `2K + 2` nodes (exact for the degree-`4K` integrands involved).
pub fn square(f: &ZonalFunction) -> Result<ZonalFunction> {
    let k = f.degree();
    let (nodes, weights) = gauss_legendre(2 * k + 2);
    let sq: Vec<f64> = nodes.iter().map(|&x| f.eval_x(x).powi(2)).collect();
    let mut out = vec![0.0; 2 * k + 1];
    for ((&x, &w), &v) in nodes.iter().zip(&weights).zip(&sq) {
        for (j, (p, _)) in LegendreIter::new(x).take(2 * k + 1).enumerate() {
            out[j] += w * v * p;
        }
    }
    for (j, c) in out.iter_mut().enumerate() {
        *c *= (2 * j + 1) as f64 / 2.0;
    }
    let g = ZonalFunction::new(out);
    let scale = f
        .coeffs
        .iter()
        .map(|a| a.abs())
        .sum::<f64>()
        .powi(2)
        .max(1.0);
    let mut residual: f64 = 0.0;
    for i in 0..=256 {
        let x = -1.0 + 2.0 * i as f64 / 256.0;
        let r = (g.eval_x(x) - f.eval_x(x).powi(2)).abs() / scale;
        if r.is_nan() || r > residual {
            residual = r;
        }
    }
    if !(residual <= PROJECTION_LIMIT) {
        return Err(HeatError::Projection {
            residual,
            limit: PROJECTION_LIMIT,
        });
    }
    Ok(g)
}

/// Uniform grid of `count` angles on `[0, π]`.
pub fn theta_grid(count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| PI * i as f64 / (count.max(2) - 1) as f64)
        .collect()
}

fn margin_tolerance(f: &ZonalFunction) -> f64 {
    let s: f64 = f.coeffs.iter().map(|a| a.abs()).sum();
    1e-10 * s.max(1.0).powi(2)
}

/// Pointwise check of `2f·(−Δ)^α f − (−Δ)^α(f²) ≥ 0` on a θ-grid.
pub fn cordoba_check(f: &ZonalFunction, alpha: f64, thetas: &[f64]) -> Result<CheckReport> {
    check_alpha("cordoba_check", alpha)?;
    let lf = frac_apply(f, alpha)?;
    let lsq = frac_apply(&square(f)?, alpha)?;
    let worst = thetas
        .iter()
        .map(|&th| {
            let x = th.cos();
            2.0 * f.eval_x(x) * lf.eval_x(x) - lsq.eval_x(x)
        })
        .fold(f64::INFINITY, f64::min);
    let tol = margin_tolerance(f);
    Ok(
        CheckReport::new("cordoba", GridSummary::of(thetas), worst, worst >= -tol)
            .param("alpha", alpha)
            .param("coefficients", f.coeffs.clone())
            .param("tolerance", tol),
    )
}

/// At the maximum point `θ̄` of `f`, check `(−Δ)^α f(θ̄) ≥ 0`.
///
/// `θ̄` is located on a 4097-point grid and refined on a second grid spanning
/// the neighbouring cells.
pub fn max_principle_check(f: &ZonalFunction, alpha: f64) -> Result<CheckReport> {
    check_alpha("max_principle_check", alpha)?;
    let grid = theta_grid(4097);
    let argmax = |pts: &[f64]| -> f64 {
        let mut best = (f64::NEG_INFINITY, pts[0]);
        for &th in pts {
            let v = f.eval(th);
            if v > best.0 {
                best = (v, th);
            }
        }
        best.1
    };
    let coarse = argmax(&grid);
    let step = grid[1] - grid[0];
    let lo = (coarse - step).max(0.0);
    let hi = (coarse + step).min(PI);
    let fine: Vec<f64> = (0..=1024)
        .map(|i| lo + (hi - lo) * i as f64 / 1024.0)
        .collect();
    let theta_bar = argmax(&fine);
    let value = frac_apply(f, alpha)?.eval(theta_bar);
    let tol = margin_tolerance(f);
    Ok(
        CheckReport::new("maxprinciple", GridSummary::of(&grid), value, value >= -tol)
            .param("alpha", alpha)
            .param("coefficients", f.coeffs.clone())
            .param("theta_max", theta_bar)
            .param("tolerance", tol),
    )
}
