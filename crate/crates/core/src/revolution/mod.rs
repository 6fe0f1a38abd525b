//! Radial geometry of hypersurfaces of revolution and spherically symmetric
//! model manifolds, and a Crank–Nicolson solver for the radial heat equation
//! `∂_t f = ∂²_ρ f + (log S)′ ∂_ρ f`.

mod estimate;
mod mollifier;
mod profile;
mod solver;
mod spline;

pub use estimate::{
    heat_kernel_estimate, heat_kernel_estimate_many, mass_estimate, solve_mollified, NODES_PER_EPS,
};
pub use mollifier::Mollifier;
pub use profile::{
    euclidean_model, hyperbolic_model, model_profile, model_profile_with_derivatives,
    profile_from_curve, profile_from_curve_with_qmax, sphere_profile, Boundary, GeneratingCurve,
    RadialFn, RadialProfile, DEFAULT_Q_MAX,
};
pub use solver::{
    monotonicity_defect, solve_heat, two_bump_values, InitialData, SolverConfig, SolverState,
    StepRecord, Trajectory, FAR_FIELD_TOL, MIN_INTERVALS,
};
