use std::f64::consts::PI;

use heatkern::kernels::*;
use heatkern::{HyperbolicRep, ModelManifold};
use proptest::prelude::*;

const TIMES: [f64; 4] = [0.01, 0.1, 1.0, 10.0];

fn radial_models() -> Vec<ModelManifold> {
    vec![
        ModelManifold::Euclidean(2),
        ModelManifold::Euclidean(3),
        ModelManifold::Sphere(2),
        ModelManifold::Sphere(3),
        ModelManifold::HyperbolicPlane,
        ModelManifold::Hyperbolic3,
    ]
}

// Interior grid on (0, L); noncompact models are cut at distance 10.
fn distance_grid(model: &ModelManifold, count: usize) -> Vec<f64> {
    let top = model.radial_extent().min(10.0);
    (1..=count)
        .map(|i| top * i as f64 / (count + 1) as f64)
        .collect()
}

#[test]
fn kernels_are_positive() {
    for model in radial_models() {
        for t in [0.05, 0.5, 2.0] {
            for d in distance_grid(&model, 32).into_iter().filter(|d| *d < 3.0) {
                let k = model.kernel(d, t, 1e-14).unwrap();
                // Spectral sums resolve values only down to their absolute error.
                assert!(
                    k.value > -k.abs_error_estimate,
                    "{model:?} d={d} t={t}: {k:?}"
                );
                if t >= 0.5 {
                    assert!(k.value > 0.0, "{model:?} d={d} t={t}");
                }
            }
        }
    }
    for (x, y) in [(0.0, 0.0), (0.5, 0.5), (0.3, 1.7)] {
        for t in [0.01, 0.1, 1.0] {
            assert!(torus_kernel(2.0, x, y, t, 1e-12).unwrap().value > 0.0);
        }
    }
}

#[test]
fn kernels_decrease_radially() {
    for model in radial_models() {
        for t in TIMES {
            let grid = distance_grid(&model, 256);
            let sup = model.kernel(1e-9, t, 1e-13).unwrap().value;
            for &d in &grid {
                let g = radial_derivative(&model, d, t, None).unwrap();
                assert!(g <= 1e-8 * sup, "{model:?} d={d} t={t}: {g}");
            }
        }
    }
}

#[test]
fn total_mass_is_one() {
    for (model, t) in [
        (ModelManifold::Sphere(2), 0.1),
        (ModelManifold::Sphere(2), 1.0),
        (ModelManifold::Sphere(3), 0.3),
        (ModelManifold::Hyperbolic3, 0.5),
        (ModelManifold::Euclidean(3), 0.2),
        (ModelManifold::flat_torus(1.5).unwrap(), 0.05),
        (ModelManifold::flat_torus(1.5).unwrap(), 1.0),
    ] {
        let m = total_mass(&model, t, 1e-9).unwrap().value;
        assert!((m - 1.0).abs() < 1e-6, "{model:?} t={t}: {m}");
    }
    for rep in [HyperbolicRep::Integral, HyperbolicRep::Spectral] {
        for t in [0.5, 2.0] {
            let m = hyperbolic2_mass(rep, t, 1e-8).unwrap().value;
            assert!((m - 1.0).abs() < 1e-6, "{rep:?} t={t}: {m}");
        }
    }
}

#[test]
fn hyperbolic_representations_agree() {
    for d in [0.25, 0.5, 1.0, 2.0, 4.0] {
        for t in [0.5, 1.0, 2.0] {
            let a = hyperbolic2_kernel_integral(d, t, 1e-12).unwrap().value;
            let b = hyperbolic2_kernel_spectral(d, t, 1e-12).unwrap().value;
            assert!((a - b).abs() < 1e-8, "d={d} t={t}: {a} vs {b}");
        }
    }
}

#[test]
fn torus_representations_agree() {
    for aspect in [1.0, 2.0, 5.0] {
        for t in [0.01, 0.1, 1.0, 10.0] {
            for i in 0..20 {
                let x = (i as f64 * 0.618_033_988_75).fract();
                let y = aspect * (i as f64 * 0.414_213_562_37).fract();
                let a = torus_kernel_images(aspect, x, y, t, 1e-14).unwrap().value;
                let b = torus_kernel_fourier(aspect, x, y, t, 1e-14).unwrap().value;
                assert!((a - b).abs() < 1e-12, "aspect={aspect} t={t}");
            }
        }
    }
}

#[test]
fn torus_semigroup() {
    let aspect = 1.5;
    let (s, t) = (0.02, 0.03);
    let n = 256;
    let (hx, hy) = (1.0 / n as f64, aspect / n as f64);
    let table = |time: f64| -> Vec<f64> {
        let mut v = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                v.push(
                    torus_kernel(aspect, i as f64 * hx, j as f64 * hy, time, 1e-14)
                        .unwrap()
                        .value,
                );
            }
        }
        v
    };
    let gs = table(s);
    let gt = table(t);
    for (px, py) in [(0usize, 0usize), (40, 100), (128, 128), (200, 17)] {
        let mut conv = 0.0;
        for i in 0..n {
            for j in 0..n {
                let di = (px + n - i) % n;
                let dj = (py + n - j) % n;
                conv += gs[di * n + dj] * gt[i * n + j];
            }
        }
        conv *= hx * hy;
        let direct = torus_kernel(aspect, px as f64 * hx, py as f64 * hy, s + t, 1e-14)
            .unwrap()
            .value;
        assert!(
            (conv - direct).abs() < 1e-4,
            "({px},{py}): {conv} vs {direct}"
        );
    }
}

#[test]
fn short_time_euclidean_limit() {
    let t = 1e-3;
    for d in [0.0, 0.05, 0.1] {
        let scale = 4.0 * PI * t * (d * d / (4.0 * t)).exp();
        let s = sphere_kernel(2, d, t, 1e-12).unwrap().value * scale;
        let h = hyperbolic2_kernel_integral(d, t, 1e-12).unwrap().value * scale;
        assert!((s - 1.0).abs() < 0.05, "sphere d={d}: {s}");
        assert!((h - 1.0).abs() < 0.05, "hyperbolic d={d}: {h}");
    }
}

#[test]
fn torus_rays_decrease() {
    for aspect in [1.0, 2.0] {
        for dir in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 3.0)] {
            let len = torus_ray_length(aspect, dir);
            for t in [0.01, 0.1, 1.0] {
                for i in 1..64 {
                    let s = len * i as f64 / 64.0;
                    let g = torus_ray_derivative(aspect, dir, s, t, None).unwrap();
                    let sup = torus_kernel(aspect, 0.0, 0.0, t, 1e-14).unwrap().value;
                    assert!(
                        g <= 1e-8 * sup,
                        "aspect={aspect} dir={dir:?} s={s} t={t}: {g}"
                    );
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn torus_is_periodic(x in -3.0f64..3.0, y in -3.0f64..3.0, t in 0.01f64..2.0) {
        let a = torus_kernel(2.0, x, y, t, 1e-13).unwrap().value;
        let b = torus_kernel(2.0, x + 1.0, y - 2.0, t, 1e-13).unwrap().value;
        let c = torus_kernel(2.0, -x, -y, t, 1e-13).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        prop_assert!((a - c).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn sphere_kernel_decreases_in_angle(a in 0.0f64..PI, b in 0.0f64..PI, t in 0.01f64..3.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-3);
        let gl = sphere_kernel(2, lo, t, 1e-14).unwrap().value;
        let gh = sphere_kernel(2, hi, t, 1e-14).unwrap().value;
        prop_assert!(gh <= gl + 1e-13);
    }

    #[test]
    fn hyperbolic3_below_euclidean(d in 0.01f64..5.0, t in 0.01f64..5.0) {
        // Negative curvature spreads heat faster: G_ℍ³ ≤ G_ℝ³ at the same distance.
        let h = hyperbolic3_kernel(d, t).unwrap().value;
        let e = euclidean_kernel(3, d, t).unwrap().value;
        prop_assert!(h <= e * (1.0 + 1e-12));
    }
}
