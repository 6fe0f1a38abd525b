//! Acceptance battery: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use heatkern::fractional::*;
use heatkern::kernels::*;
use heatkern::revolution::*;
use heatkern::specfun::*;
use heatkern::{HyperbolicRep, ModelManifold, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

/// Outcome of one criterion: pass flag plus a short detail line.
struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn torus_duality() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut worst = 0.0f64;
    for aspect in [1.0, 2.0, 5.0] {
        for t in [0.01, 0.1, 1.0, 10.0] {
            for _ in 0..100 {
                let x: f64 = rng.gen_range(0.0..1.0);
                let y: f64 = rng.gen_range(0.0..aspect);
                let a = torus_kernel_images(aspect, x, y, t, 1e-14)?.value;
                let b = torus_kernel_fourier(aspect, x, y, t, 1e-14)?.value;
                worst = worst.max((a - b).abs());
            }
        }
    }
    outcome(
        worst <= 1e-12,
        format!("max |images - fourier| = {worst:.3e}"),
    )
}

fn mass_normalization() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut check = |m: f64| worst = worst.max((m - 1.0).abs());
    for t in [0.1, 1.0] {
        check(total_mass(&ModelManifold::Sphere(2), t, 1e-9)?.value);
    }
    for rep in [HyperbolicRep::Integral, HyperbolicRep::Spectral] {
        for t in [0.5, 2.0] {
            check(hyperbolic2_mass(rep, t, 1e-8)?.value);
        }
    }
    for t in [0.5, 2.0] {
        check(total_mass(&ModelManifold::Hyperbolic3, t, 1e-9)?.value);
    }
    for aspect in [1.0, 2.0] {
        for t in [0.05, 1.0] {
            check(total_mass(&ModelManifold::flat_torus(aspect)?, t, 1e-9)?.value);
        }
    }
    outcome(worst <= 1e-6, format!("max |mass - 1| = {worst:.3e}"))
}

fn hyperbolic_duality() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for d in [0.25, 0.5, 1.0, 2.0, 4.0] {
        for t in [0.5, 1.0, 2.0] {
            let a = hyperbolic2_kernel_integral(d, t, 1e-12)?.value;
            let b = hyperbolic2_kernel_spectral(d, t, 1e-12)?.value;
            worst = worst.max((a - b).abs());
        }
    }
    outcome(
        worst <= 1e-8,
        format!("max |integral - spectral| = {worst:.3e}"),
    )
}

fn kernel_monotonicity() -> Result<Outcome> {
    let models = [
        ModelManifold::Euclidean(2),
        ModelManifold::Euclidean(3),
        ModelManifold::Sphere(2),
        ModelManifold::HyperbolicPlane,
        ModelManifold::Hyperbolic3,
    ];
    let mut worst = f64::NEG_INFINITY;
    for model in &models {
        let top = model.radial_extent().min(10.0);
        for t in [0.01, 0.1, 1.0, 10.0] {
            let sup = model.kernel(1e-9, t, 1e-13)?.value;
            for i in 1..=256 {
                let d = top * i as f64 / 257.0;
                worst = worst.max(radial_derivative(model, d, t, None)? / sup);
            }
        }
    }
    outcome(worst <= 1e-8, format!("max dG/dd / sup G = {worst:.3e}"))
}

fn solver_vs_spectral() -> Result<Outcome> {
    let start = Instant::now();
    let p = sphere_profile(1.0, 3)?;
    let ds: Vec<f64> = (0..=64).map(|i| PI * i as f64 / 64.0).collect();
    let est = heat_kernel_estimate_many(&p, &ds, 0.1, &[0.1, 0.05, 0.025])?;
    let elapsed = start.elapsed().as_secs_f64();
    let mut err = 0.0f64;
    let mut peak = 0.0f64;
    for (d, e) in ds.iter().zip(&est) {
        let o = sphere_kernel(2, *d, 0.1, 1e-14)?.value;
        err = err.max((e.value - o).abs());
        peak = peak.max(o.abs());
    }
    let rel = err / peak;
    outcome(
        rel <= 1e-3 && elapsed <= 60.0,
        format!("L-inf relative error = {rel:.3e}, runtime = {elapsed:.1} s"),
    )
}

fn solver_monotonicity() -> Result<Outcome> {
    let cap = GeneratingCurve::spherical_cap(2.0 * PI / 3.0);
    let profiles = vec![
        ("sphere", sphere_profile(1.0, 3)?),
        (
            "ellipsoid",
            profile_from_curve(&GeneratingCurve::ellipsoid(1.0, 2.0), 3, Boundary::Closed)?,
        ),
        ("euclidean", euclidean_model(3, 10.0)?),
        ("hyperbolic", hyperbolic_model(3, 10.0)?),
        (
            "cap-dirichlet",
            profile_from_curve(&cap, 3, Boundary::Dirichlet)?,
        ),
        (
            "cap-neumann",
            profile_from_curve(&cap, 3, Boundary::Neumann)?,
        ),
    ];
    let mut worst = f64::NEG_INFINITY;
    let mut worst_label = "";
    for (label, p) in &profiles {
        let m = Mollifier::new(p, 0.1)?;
        let traj = solve_heat(p, &InitialData::Mollifier(m), 0.5, &SolverConfig::new(256))?;
        let r = traj.max_relative_defect();
        if r > worst {
            worst = r;
            worst_label = label;
        }
    }
    outcome(
        worst <= 1e-8,
        format!("max defect / max f = {worst:.3e} ({worst_label})"),
    )
}

fn solver_mass() -> Result<Outcome> {
    let cap = GeneratingCurve::spherical_cap(2.0 * PI / 3.0);
    let closed = sphere_profile(1.0, 3)?;
    let neumann = profile_from_curve(&cap, 3, Boundary::Neumann)?;
    let dirichlet = profile_from_curve(&cap, 3, Boundary::Dirichlet)?;
    let solve = |p: &RadialProfile| -> Result<Trajectory> {
        let m = Mollifier::new(p, 0.1)?;
        solve_heat(p, &InitialData::Mollifier(m), 0.5, &SolverConfig::new(256))
    };
    let drift = solve(&closed)?
        .mass_drift()
        .max(solve(&neumann)?.mass_drift());
    let d = solve(&dirichlet)?;
    let decreasing = d.mass_strictly_decreasing();
    outcome(
        drift <= 1e-6 && decreasing,
        format!(
            "closed/neumann drift = {drift:.3e}, dirichlet strictly decreasing over {} steps = {decreasing}",
            d.steps.len()
        ),
    )
}

fn fractional_kernel() -> Result<Outcome> {
    let mut shape_ok = true;
    for alpha in [0.25, 0.5, 0.75] {
        let ks: Vec<f64> = (0..64)
            .map(|i| 0.05 + (3.1 - 0.05) * i as f64 / 63.0)
            .map(|d| subordinate_kernel(2, alpha, d, 1e-10).map(|v| v.k))
            .collect::<Result<_>>()?;
        shape_ok &= ks.iter().all(|k| *k > 0.0) && ks.windows(2).all(|w| w[1] < w[0]);
    }
    let mut worst = 0.0f64;
    for (alpha, d) in [
        (0.25, 0.1),
        (0.5, 0.5),
        (0.75, 1.0),
        (0.5, 2.0),
        (0.25, 3.0),
    ] {
        let v = subordinate_kernel(2, alpha, d, 1e-10)?.k;
        let o = common::subordination_oracle(alpha, d);
        worst = worst.max(((v - o) / o).abs());
    }
    outcome(
        shape_ok && worst <= 1e-5,
        format!("positive and decreasing = {shape_ok}, max oracle relative error = {worst:.3e}"),
    )
}

fn fractional_heat_kernel() -> Result<Outcome> {
    let grid = theta_grid(256);
    let mut ok = true;
    for alpha in [0.3, 0.5, 0.9] {
        for t in [0.1, 1.0] {
            let vals: Vec<f64> = grid
                .iter()
                .map(|&th| frac_heat_kernel(alpha, th, t, 1e-13).map(|k| k.value))
                .collect::<Result<_>>()?;
            ok &= vals.windows(2).all(|w| w[1] < w[0]);
        }
    }
    outcome(ok, format!("strictly decreasing in theta = {ok}"))
}

fn positivity_corollaries() -> Result<Outcome> {
    let xs: Vec<f64> = (0..1000)
        .map(|i| -0.999 + 1.998 * i as f64 / 999.0)
        .collect();
    let mut min_legendre = f64::INFINITY;
    for f in [
        CMFunction::stretched_exponential(0.5),
        CMFunction::inverse_power(1.0, 3.0),
    ] {
        for &x in &xs {
            min_legendre = min_legendre.min(legendre_cm_sum(&f, x, None, 1e-10)?.value);
        }
    }
    let g = CMFunction::inverse_power(0.25, 2.0);
    let mut min_mehler = f64::INFINITY;
    for r in [0.5, 1.0, 2.0] {
        min_mehler = min_mehler.min(mehler_cm_integral(&g, r, 1e-9)?.value);
    }
    let mut min_fejer = f64::INFINITY;
    for &x in &xs {
        min_fejer = min_fejer.min(fejer_sum(200, x)?);
    }
    outcome(
        min_legendre > 0.0 && min_mehler > 0.0 && min_fejer > 0.0,
        format!("min legendre = {min_legendre:.3e}, min mehler = {min_mehler:.3e}, min fejer = {min_fejer:.3e}"),
    )
}

fn pointwise_inequalities() -> Result<Outcome> {
    let battery = [
        ZonalFunction::legendre(1),
        ZonalFunction::new(vec![0.0, 0.7, 0.0, 0.0, 0.3]),
    ];
    let grid = theta_grid(1000);
    let mut cordoba = f64::INFINITY;
    let mut maxp = f64::INFINITY;
    for f in &battery {
        for alpha in [0.25, 0.5, 0.75] {
            cordoba = cordoba.min(cordoba_check(f, alpha, &grid)?.worst_margin);
            maxp = maxp.min(max_principle_check(f, alpha)?.worst_margin);
        }
    }
    outcome(
        cordoba >= -1e-10 && maxp >= 0.0,
        format!("min cordoba margin = {cordoba:.3e}, min max-principle value = {maxp:.3e}"),
    )
}

fn special_functions() -> Result<Outcome> {
    let xs: Vec<f64> = (0..201).map(|i| -1.0 + i as f64 / 100.0).collect();
    let mut recurrence = true;
    let mut endpoints = true;
    let mut bound = true;
    let mut gegenbauer = true;
    let mut identity = true;
    for n in 0..=200usize {
        let nf = n as f64;
        endpoints &= legendre_p(n, 1.0)? == 1.0
            && legendre_p(n, -1.0)? == if n % 2 == 0 { 1.0 } else { -1.0 };
        for &x in &xs {
            let p = legendre_p(n, x)?;
            bound &= legendre_p_prime(n, x)?.abs() <= nf * (nf + 1.0) / 2.0;
            if n >= 1 {
                let pm = legendre_p(n - 1, x)?;
                let pp = legendre_p(n + 1, x)?;
                let scale = ((2.0 * nf + 1.0) * (x * p).abs() + nf * pm.abs()).max(1.0);
                recurrence &=
                    ((nf + 1.0) * pp - (2.0 * nf + 1.0) * x * p + nf * pm).abs() <= 1e-12 * scale;
                if n <= 100 {
                    let lhs = (1.0 - x * x) * (2.0 * nf + 1.0) * legendre_p_prime(n, x)?;
                    identity &=
                        (lhs - nf * (nf + 1.0) * (pm - pp)).abs() <= 1e-11 * nf * (nf + 1.0);
                }
            }
            if n <= 100 {
                gegenbauer &= (gegenbauer_c(n, 0.5, x)? - p).abs() <= 1e-12;
            }
        }
    }
    outcome(
        recurrence && endpoints && bound && gegenbauer && identity,
        format!(
            "recurrence = {recurrence}, endpoints = {endpoints}, derivative bound = {bound}, \
             gegenbauer = {gegenbauer}, identity = {identity}"
        ),
    )
}

fn short_time_limit() -> Result<Outcome> {
    let t = 1e-3;
    let mut worst = 0.0f64;
    for d in [0.0, 0.025, 0.05, 0.075, 0.1] {
        let scale = 4.0 * PI * t * (d * d / (4.0 * t)).exp();
        worst = worst.max((sphere_kernel(2, d, t, 1e-12)?.value * scale - 1.0).abs());
        worst = worst.max((hyperbolic2_kernel_integral(d, t, 1e-12)?.value * scale - 1.0).abs());
    }
    outcome(worst <= 0.05, format!("max |ratio - 1| = {worst:.3e}"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Result<Outcome>);
    let criteria: [Criterion; 13] = [
        ("torus duality", torus_duality),
        ("mass normalization", mass_normalization),
        ("hyperbolic duality", hyperbolic_duality),
        ("kernel monotonicity", kernel_monotonicity),
        ("solver vs spectral oracle", solver_vs_spectral),
        ("solver monotonicity defect", solver_monotonicity),
        ("solver mass behavior", solver_mass),
        ("fractional kernel", fractional_kernel),
        ("fractional heat kernel", fractional_heat_kernel),
        ("positivity corollaries", positivity_corollaries),
        ("pointwise inequalities", pointwise_inequalities),
        ("special functions", special_functions),
        ("short-time limit", short_time_limit),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {:<28} {}  {} [{:.1} s]",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
