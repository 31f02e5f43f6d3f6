use thiserror::Error;

/// Failures raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The truncated Fock space loses more probability than allowed; enlarge `dim`.
    #[error("truncation at dim {dim} leaks {leaked:.3e} of probability (tolerance {tolerance:.1e})")]
    Truncation { dim: usize, leaked: f64, tolerance: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// A conditional branch has (numerically) vanishing probability.
    #[error("trace {trace:.3e} is at or below the numerical tolerance")]
    ZeroTrace { trace: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("target {target} is not bracketed; achievable range is [{low}, {high}]")]
    NoBracket { target: f64, low: f64, high: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
