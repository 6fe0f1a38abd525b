use crate::error::{HeatError, Result};
use crate::kernels::KernelValue;

use super::mollifier::Mollifier;
use super::profile::RadialProfile;
use super::solver::{solve_heat, InitialData, SolverConfig, Trajectory, MIN_INTERVALS};

/// Grid nodes per smallest mollifier width.
pub const NODES_PER_EPS: f64 = 8.0;

fn intervals_for(profile: &RadialProfile, eps_min: f64) -> usize {
    ((profile.length() * NODES_PER_EPS / eps_min).ceil() as usize).max(MIN_INTERVALS)
}

/// Solve from the mollifier of width `eps` on a grid of `intervals` cells,
/// keeping only the initial and final states.
pub fn solve_mollified(
    profile: &RadialProfile,
    eps: f64,
    t: f64,
    intervals: usize,
) -> Result<Trajectory> {
    let m = Mollifier::new(profile, eps)?;
    let config = SolverConfig {
        intervals,
        dt: None,
        records: 2,
    };
    solve_heat(profile, &InitialData::Mollifier(m), t, &config)
}

fn check_eps_list(eps: &[f64]) -> Result<()> {
    if eps.len() < 2 {
        return Err(HeatError::domain(
            "heat_kernel_estimate",
            "need at least two mollifier widths",
        ));
    }
    if eps.iter().any(|e| !(*e > 0.0)) || eps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(HeatError::domain(
            "heat_kernel_estimate",
            "mollifier widths must be positive and strictly decreasing",
        ));
    }
    Ok(())
}

/// Value at `x = 0` of the polynomial through `(xs[i], ys[i])`.
fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

fn extrapolate(eps: &[f64], values: &[f64]) -> KernelValue {
    let xs: Vec<f64> = eps.iter().map(|e| e * e).collect();
    let full = neville_at_zero(&xs, values);
    let reduced = neville_at_zero(&xs[..xs.len() - 1], &values[..values.len() - 1]);
    KernelValue {
        value: full,
        abs_error_estimate: (full - reduced).abs(),
    }
}

/// Heat kernel of a radial profile at the distances `ds`, from mollified
/// solves extrapolated to `ε → 0` in powers of `ε²`.
pub fn heat_kernel_estimate_many(
    profile: &RadialProfile,
    ds: &[f64],
    t: f64,
    eps: &[f64],
) -> Result<Vec<KernelValue>> {
    check_eps_list(eps)?;
    if let Some(d) = ds.iter().find(|d| !(**d >= 0.0 && **d <= profile.length())) {
        return Err(HeatError::domain(
            "heat_kernel_estimate",
            format!("distance {d} outside [0, {}]", profile.length()),
        ));
    }
    let intervals = intervals_for(profile, eps[eps.len() - 1]);
    let mut columns = Vec::with_capacity(eps.len());
    for &e in eps {
        let traj = solve_mollified(profile, e, t, intervals)?;
        let last = traj.final_state();
        columns.push(
            ds.iter()
                .map(|&d| traj.interpolate(last, d))
                .collect::<Vec<_>>(),
        );
    }
    Ok((0..ds.len())
        .map(|j| {
            let vals: Vec<f64> = columns.iter().map(|c| c[j]).collect();
            extrapolate(eps, &vals)
        })
        .collect())
}

/// Single-distance version of [`heat_kernel_estimate_many`].
pub fn heat_kernel_estimate(
    profile: &RadialProfile,
    d: f64,
    t: f64,
    eps: &[f64],
) -> Result<KernelValue> {
    heat_kernel_estimate_many(profile, &[d], t, eps).map(|v| v[0])
}

/// Discrete mass of the mollified solution at time `t`.
pub fn mass_estimate(profile: &RadialProfile, t: f64, eps: f64) -> Result<KernelValue> {
    let traj = solve_mollified(profile, eps, t, intervals_for(profile, eps))?;
    let last = traj.final_state();
    Ok(KernelValue {
        value: last.mass,
        abs_error_estimate: 1e-12 * traj.steps.len() as f64,
    })
}
