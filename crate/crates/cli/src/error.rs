use heatkern::HeatError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Heat(#[from] HeatError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Heat(e) if e.is_numerical() => 3,
            CliError::Heat(HeatError::BoundaryMismatch(_)) => 3,
            CliError::Heat(_) => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// How a successful run ended: all checks held, or some check failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
    SuiteFailed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 4,
            Status::SuiteFailed => 5,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Status::Ok.code(), 0);
        assert_eq!(Status::CheckFailed.code(), 4);
        assert_eq!(Status::SuiteFailed.code(), 5);
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        let nonconv = HeatError::NonConvergence {
            estimate: 0.0,
            abs_error_estimate: 1.0,
            tolerance: 0.1,
        };
        assert_eq!(CliError::Heat(nonconv).exit_code(), 3);
        assert_eq!(
            CliError::Heat(HeatError::Stability {
                dt: 1.0,
                dt_max: 0.5
            })
            .exit_code(),
            3
        );
        assert_eq!(
            CliError::Heat(HeatError::BoundaryMismatch("x".into())).exit_code(),
            3
        );
        assert_eq!(
            CliError::Heat(HeatError::ProfileRejected("x".into())).exit_code(),
            2
        );
    }
}
