use thiserror::Error;

/// Errors produced by the library.
///
/// The CLI maps these onto its exit-code contract: argument and parse
/// problems are usage errors, numerical failures are reported separately.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("support reduction degraded moments: residual {residual:e} exceeds tolerance {tol:e}")]
    Reduction { residual: f64, tol: f64 },

    #[error("infeasible: {reason} (best residual {residual:e})")]
    Infeasible { reason: String, residual: f64 },

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Reduction { .. } | Error::Infeasible { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
