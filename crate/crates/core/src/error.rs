use thiserror::Error;

/// Errors raised by the decomposition library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("column range [{lo}, {hi}) exceeds the column budget {budget}")]
    BudgetExceeded { lo: usize, hi: usize, budget: usize },

    #[error("decomposition identity residual {residual:.3e} exceeds tolerance {tolerance:.1e} at m = {m}")]
    DecompositionMismatch {
        m: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("iterative solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("{algorithm} failed to converge")]
    NoConvergence { algorithm: &'static str },

    #[error("format error at byte {offset}: {message}")]
    Format { offset: u64, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
