//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Direct Legendre sum for the S² heat kernel, stopping once terms are negligible.
pub fn s2_kernel_direct(x: f64, t: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    let mut sum = 1.0 / (4.0 * PI) + 3.0 / (4.0 * PI) * (-2.0 * t).exp() * x;
    let mut k = 2usize;
    loop {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        let w = (2.0 * kf + 1.0) / (4.0 * PI) * (-kf * (kf + 1.0) * t).exp();
        sum += w * p2;
        if w < 1e-22 {
            return sum;
        }
        p0 = p1;
        p1 = p2;
        k += 1;
    }
}

/// Midpoint rule in log t over [1e−6, 1e3] plus the constant-mode tail beyond 1e3.
pub fn subordination_oracle(alpha: f64, d: f64) -> f64 {
    let (a, b) = (1e-6_f64.ln(), 1e3_f64.ln());
    let n = 100_000;
    let h = (b - a) / n as f64;
    let x = d.cos();
    let mut sum = 0.0;
    for i in 0..n {
        let t = (a + (i as f64 + 0.5) * h).exp();
        sum += s2_kernel_direct(x, t) * t.powf(-alpha) * h;
    }
    sum + 1e3_f64.powf(-alpha) / (alpha * 4.0 * PI)
}
