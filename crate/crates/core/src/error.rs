use thiserror::Error;

/// Errors produced by the transform library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A special function was called outside its domain.
    #[error("{function}: argument {x} is outside the domain")]
    Domain { function: &'static str, x: f64 },

    /// Adaptive coefficient quadrature hit its depth limit on `[lo, hi]`.
    #[error("integration did not converge on [{lo}, {hi}] (error estimate {error:e})")]
    Integration { lo: f64, hi: f64, error: f64 },

    /// The oracle exhausted its panel budget. The best estimate is attached.
    #[error("quadrature did not converge: estimate {estimate} with error bound {error_bound:e} after {panels} panels")]
    Convergence {
        estimate: f64,
        error_bound: f64,
        panels: usize,
    },

    /// Requested resolution level exceeds what a table can index.
    #[error("level {level} exceeds the maximum supported level {max}")]
    Capacity { level: u32, max: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed input data; `line` is 1-based and counts the header.
    #[error("line {line}: {message}")]
    Input { line: u64, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
