//! Heat kernels on model manifolds.
//!
//! Closed-form and spectral kernels for Euclidean space, spheres, the
//! hyperbolic plane and space, and flat tori; a conservative Crank–Nicolson
//! solver for the radial heat equation on hypersurfaces of revolution and
//! spherically symmetric model manifolds; and fractional (subordinated)
//! kernels with the positivity and pointwise-inequality checks built on them.

// Input guards are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fractional;
pub mod kernels;
pub mod quad;
pub mod report;
pub mod revolution;
pub mod specfun;

pub use error::{HeatError, Result};
pub use kernels::{HyperbolicRep, KernelValue, ModelManifold};
pub use quad::QuadResult;
pub use report::CheckReport;
pub use revolution::{Boundary, RadialProfile};
