use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A series could not be certified to converge below the requested tolerance.
    #[error("series not summable to tolerance {tol:e}: {reason}")]
    NonSummable { tol: f64, reason: String },

    /// The potential fails the Walters regularity criterion.
    #[error("potential is not Walters-regular: {0}")]
    NotRegular(String),

    #[error("invalid stochastic matrix: {0}")]
    InvalidStochastic(String),

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("depth mismatch: potential depth {potential}, function depth {function}")]
    DepthMismatch { potential: usize, function: usize },

    #[error("potential is not normalized: {0}")]
    NotNormalized(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
