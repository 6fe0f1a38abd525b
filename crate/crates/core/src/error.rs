use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeatError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// An adaptive quadrature exhausted its subdivision budget.
    #[error(
        "quadrature did not converge: estimate {estimate:e} with error {abs_error_estimate:e} > tolerance {tolerance:e}"
    )]
    NonConvergence {
        estimate: f64,
        abs_error_estimate: f64,
        tolerance: f64,
    },

    /// A spectral series would need more terms than the configured budget.
    #[error("series truncation budget exceeded in {op}: {detail}")]
    TruncationBudget { op: &'static str, detail: String },

    /// A radial profile failed validation.
    #[error("profile rejected: {0}")]
    ProfileRejected(String),

    /// A solver configuration violates the time-step policy.
    #[error("solver rejected: dt = {dt:e} exceeds dt_max = {dt_max:e}")]
    Stability { dt: f64, dt_max: f64 },

    /// Initial data or configuration incompatible with the boundary kind.
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),

    /// A completely-monotonic or decay precondition failed.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Legendre projection of a product did not reproduce it.
    #[error("projection residual {residual:e} exceeds {limit:e}")]
    Projection { residual: f64, limit: f64 },

    /// Malformed tabular input.
    #[error("parse error: {0}")]
    Parse(String),
}

impl HeatError {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        HeatError::Domain {
            op,
            detail: detail.into(),
        }
    }

    /// True for failures of a numerical method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            HeatError::NonConvergence { .. }
                | HeatError::TruncationBudget { .. }
                | HeatError::Stability { .. }
                | HeatError::Projection { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, HeatError>;
