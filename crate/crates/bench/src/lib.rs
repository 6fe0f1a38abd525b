//! Benchmark groups for the kernel evaluators, the radial solver and the
//! fractional machinery. The `bench_main` target wires them into criterion.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use heatkern::fractional::{
    cordoba_check, frac_heat_kernel, legendre_cm_sum, mehler_cm_integral, subordinate_kernel,
    theta_grid, CMFunction, ZonalFunction,
};
use heatkern::kernels::{
    hyperbolic2_kernel_integral, hyperbolic2_kernel_spectral, hyperbolic3_kernel, sphere_kernel,
    torus_kernel_fourier, torus_kernel_images,
};
use heatkern::revolution::{
    heat_kernel_estimate, profile_from_curve, solve_heat, sphere_profile, GeneratingCurve,
    InitialData, Mollifier, SolverConfig,
};
use heatkern::specfun::{conical_p, legendre_p};
use heatkern::Boundary;

pub fn special_functions(c: &mut Criterion) {
    let mut g = c.benchmark_group("specfun");
    for n in [10usize, 100, 1000] {
        g.bench_with_input(BenchmarkId::new("legendre_p", n), &n, |b, &n| {
            b.iter(|| legendre_p(black_box(n), black_box(0.37)))
        });
    }
    for v in [0.5, 5.0, 20.0] {
        g.bench_with_input(BenchmarkId::new("conical_p", v), &v, |b, &v| {
            b.iter(|| conical_p(black_box(v), black_box(1.5)))
        });
    }
    g.finish();
}

pub fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernels");
    for t in [0.01, 0.1, 1.0] {
        g.bench_with_input(BenchmarkId::new("sphere2", t), &t, |b, &t| {
            b.iter(|| sphere_kernel(2, black_box(1.0), t, 1e-12))
        });
    }
    g.bench_function("hyperbolic2_integral", |b| {
        b.iter(|| hyperbolic2_kernel_integral(black_box(1.0), 1.0, 1e-12))
    });
    g.bench_function("hyperbolic2_spectral", |b| {
        b.iter(|| hyperbolic2_kernel_spectral(black_box(1.0), 1.0, 1e-12))
    });
    g.bench_function("hyperbolic3", |b| {
        b.iter(|| hyperbolic3_kernel(black_box(1.0), 1.0))
    });
    for t in [0.01, 1.0] {
        g.bench_with_input(BenchmarkId::new("torus_images", t), &t, |b, &t| {
            b.iter(|| torus_kernel_images(2.0, black_box(0.3), 0.7, t, 1e-14))
        });
        g.bench_with_input(BenchmarkId::new("torus_fourier", t), &t, |b, &t| {
            b.iter(|| torus_kernel_fourier(2.0, black_box(0.3), 0.7, t, 1e-14))
        });
    }
    g.finish();
}

pub fn solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("solver");
    g.sample_size(10);
    let sphere = sphere_profile(1.0, 3).expect("sphere profile");
    let cap = profile_from_curve(&GeneratingCurve::spherical_cap(2.0), 3, Boundary::Dirichlet)
        .expect("cap profile");
    for n in [256usize, 1024] {
        g.bench_with_input(BenchmarkId::new("sphere_t0.05", n), &n, |b, &n| {
            let m = Mollifier::new(&sphere, 0.1).expect("mollifier");
            let init = InitialData::Mollifier(m);
            b.iter(|| solve_heat(&sphere, &init, 0.05, &SolverConfig::new(n)))
        });
    }
    g.bench_function("cap_dirichlet_t0.05", |b| {
        let init = InitialData::Mollifier(Mollifier::new(&cap, 0.1).expect("mollifier"));
        b.iter(|| solve_heat(&cap, &init, 0.05, &SolverConfig::new(256)))
    });
    g.bench_function("kernel_estimate_sphere", |b| {
        b.iter(|| heat_kernel_estimate(&sphere, black_box(1.0), 0.1, &[0.2, 0.1, 0.05]))
    });
    g.finish();
}

pub fn fractional(c: &mut Criterion) {
    let mut g = c.benchmark_group("fractional");
    g.bench_function("subordinate_kernel", |b| {
        b.iter(|| subordinate_kernel(2, 0.5, black_box(1.0), 1e-10))
    });
    g.bench_function("frac_heat_kernel", |b| {
        b.iter(|| frac_heat_kernel(0.5, black_box(1.0), 0.1, 1e-12))
    });
    let f = CMFunction::inverse_power(1.0, 3.0);
    g.bench_function("legendre_cm_sum", |b| {
        b.iter(|| legendre_cm_sum(&f, black_box(0.3), None, 1e-10))
    });
    let h = CMFunction::inverse_power(0.25, 2.0);
    g.bench_function("mehler_cm_integral", |b| {
        b.iter(|| mehler_cm_integral(&h, black_box(1.0), 1e-9))
    });
    let z = ZonalFunction::new(vec![0.0, 0.7, 0.0, 0.0, 0.3]);
    let grid = theta_grid(1000);
    g.bench_function("cordoba_check", |b| {
        b.iter(|| cordoba_check(&z, 0.5, &grid))
    });
    g.finish();
}
