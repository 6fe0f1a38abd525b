//! Legendre, Gegenbauer and conical Legendre functions.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{HeatError, Result};
use crate::quad::{integrate_finite, QuadResult};

/// Default absolute tolerance for the quadrature-backed conical functions.
pub const CONICAL_TOL: f64 = 1e-13;

fn check_unit_interval(op: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x.abs() <= 1.0 {
        Ok(())
    } else {
        Err(HeatError::domain(
            op,
            format!("argument {x} outside [-1, 1]"),
        ))
    }
}

/// Upward iterator over `(P_n(x), P_n'(x))` for `n = 0, 1, 2, …`.
///
/// Uses `(n+1)P_{n+1} = (2n+1)xP_n − nP_{n−1}` and
/// `P'_{n+1} = P'_{n−1} + (2n+1)P_n`. The caller is responsible for `|x| ≤ 1`.
#[derive(Debug, Clone)]
pub struct LegendreIter {
    x: f64,
    n: usize,
    p_prev: f64,
    p: f64,
    dp_prev: f64,
    dp: f64,
}

impl LegendreIter {
    pub fn new(x: f64) -> Self {
        LegendreIter {
            x,
            n: 0,
            p_prev: 0.0,
            p: 1.0,
            dp_prev: 0.0,
            dp: 0.0,
        }
    }
}

impl Iterator for LegendreIter {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        let out = (self.p, self.dp);
        let n = self.n as f64;
        let p_next = ((2.0 * n + 1.0) * self.x * self.p - n * self.p_prev) / (n + 1.0);
        let dp_next = if self.n == 0 {
            1.0
        } else {
            self.dp_prev + (2.0 * n + 1.0) * self.p
        };
        self.p_prev = self.p;
        self.p = p_next;
        self.dp_prev = self.dp;
        self.dp = dp_next;
        self.n += 1;
        Some(out)
    }
}

/// Legendre polynomial `P_n(x)` on `[-1, 1]`.
///
/// Endpoints are returned exactly: `P_n(1) = 1`, `P_n(−1) = (−1)^n`.
pub fn legendre_p(n: usize, x: f64) -> Result<f64> {
    check_unit_interval("legendre_p", x)?;
    if x == 1.0 {
        return Ok(1.0);
    }
    if x == -1.0 {
        return Ok(if n.is_multiple_of(2) { 1.0 } else { -1.0 });
    }
    Ok(LegendreIter::new(x).nth(n).expect("infinite iterator").0)
}

/// Derivative `P_n'(x)`. Satisfies `|P_n'(x)| ≤ P_n'(1) = n(n+1)/2`.
pub fn legendre_p_prime(n: usize, x: f64) -> Result<f64> {
    check_unit_interval("legendre_p_prime", x)?;
    let top = (n * (n + 1) / 2) as f64;
    if x == 1.0 {
        return Ok(top);
    }
    if x == -1.0 {
        return Ok(if n.is_multiple_of(2) { -top } else { top });
    }
    Ok(LegendreIter::new(x).nth(n).expect("infinite iterator").1)
}

/// Gegenbauer (ultraspherical) polynomial `C_k^λ(x)` for `λ > 0`.
pub fn gegenbauer_c(k: usize, lambda: f64, x: f64) -> Result<f64> {
    check_unit_interval("gegenbauer_c", x)?;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(HeatError::domain(
            "gegenbauer_c",
            format!("lambda must be positive, got {lambda}"),
        ));
    }
    Ok(gegenbauer_unchecked(k, lambda, x))
}

pub(crate) fn gegenbauer_unchecked(k: usize, lambda: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 2.0 * lambda * x;
    for j in 2..=k {
        let jf = j as f64;
        let next = (2.0 * x * (jf + lambda - 1.0) * cur - (jf + 2.0 * lambda - 2.0) * prev) / jf;
        prev = cur;
        cur = next;
    }
    cur
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = LegendreIter::new(x).nth(n).expect("infinite iterator");
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = LegendreIter::new(x).nth(n).expect("infinite iterator");
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

// cosh r − cosh(r − w²) without cancellation.
fn cosh_gap(r: f64, w2: f64) -> f64 {
    2.0 * (r - 0.5 * w2).sinh() * (0.5 * w2).sinh()
}

// sinh r − sinh(r − w²) without cancellation.
fn sinh_gap(r: f64, w2: f64) -> f64 {
    2.0 * (r - 0.5 * w2).cosh() * (0.5 * w2).sinh()
}

fn check_conical(op: &'static str, v: f64, r: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(HeatError::domain(op, format!("v must be >= 0, got {v}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(HeatError::domain(op, format!("r must be >= 0, got {r}")));
    }
    Ok(())
}

/// Conical function `P_{−1/2+iv}(cosh r)` with the default tolerance.
pub fn conical_p(v: f64, r: f64) -> Result<f64> {
    conical_p_with_tol(v, r, CONICAL_TOL).map(|q| q.value)
}

/// Conical function `P_{−1/2+iv}(cosh r)` from the Mehler–Dirichlet integral
///
/// `(√2/π) ∫_0^r cos(vu) / √(cosh r − cosh u) du`,
///
/// evaluated after `u = r − w²`, which turns the inverse square root at
/// `u = r` into the bounded integrand `2w cos(v(r−w²)) / √(cosh r − cosh(r−w²))`.
pub fn conical_p_with_tol(v: f64, r: f64, tol: f64) -> Result<QuadResult> {
    check_conical("conical_p", v, r)?;
    if r == 0.0 {
        return Ok(QuadResult {
            value: 1.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let c = SQRT_2 / PI;
    let limit = 2.0 / r.sinh().sqrt();
    let integrand = |w: f64| {
        let w2 = w * w;
        let phase = (v * (r - w2)).cos();
        if 0.5 * w2 == 0.0 {
            return limit * phase;
        }
        2.0 * w * phase / cosh_gap(r, w2).sqrt()
    };
    let q = integrate_finite(integrand, 0.0, r.sqrt(), tol / c)?;
    Ok(QuadResult {
        value: c * q.value,
        abs_error_estimate: c * q.abs_error_estimate,
        evaluations: q.evaluations,
    })
}

/// Derivative `d/ds P_{−1/2+iv}(s)` at `s = cosh r`, default tolerance.
pub fn conical_p_prime(v: f64, r: f64) -> Result<f64> {
    conical_p_prime_with_tol(v, r, CONICAL_TOL).map(|q| q.value)
}

/// Derivative of the conical function with respect to its argument `cosh r`.
///
/// Differentiates the substituted Mehler–Dirichlet integral in `r` (the moving
/// upper limit `√r` contributes `1/√(cosh r − 1)`) and divides by `sinh r`.
/// Needs `r > 0`; the two contributions cancel increasingly as `r → 0`.
pub fn conical_p_prime_with_tol(v: f64, r: f64, tol: f64) -> Result<QuadResult> {
    check_conical("conical_p_prime", v, r)?;
    if r == 0.0 {
        return Err(HeatError::domain(
            "conical_p_prime",
            "derivative requires r > 0",
        ));
    }
    let c = SQRT_2 / PI;
    let sh = r.sinh();
    let limit = (-2.0 * v * (v * r).sin() + (v * r).cos() * r.cosh() / sh) / sh.sqrt();
    let integrand = |w: f64| {
        let w2 = w * w;
        if 0.5 * w2 == 0.0 {
            return limit;
        }
        let arg = v * (r - w2);
        let d = cosh_gap(r, w2);
        let e = sinh_gap(r, w2);
        let sd = d.sqrt();
        2.0 * w * (-v * arg.sin() / sd - arg.cos() * e / (2.0 * d * sd))
    };
    let scale = c / sh;
    let q = integrate_finite(integrand, 0.0, r.sqrt(), tol / scale)?;
    let boundary = 1.0 / (r.cosh() - 1.0).sqrt();
    Ok(QuadResult {
        value: scale * (boundary + q.value),
        abs_error_estimate: scale * q.abs_error_estimate,
        evaluations: q.evaluations,
    })
}

/// Gamma function (Lanczos approximation via `statrs`).
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// Volume of the unit sphere `S^k ⊂ ℝ^{k+1}`.
pub fn sphere_volume(k: usize) -> f64 {
    let h = (k as f64 + 1.0) / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}
