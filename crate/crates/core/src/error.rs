use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A function argument was NaN or infinite where a finite value is required.
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    /// A function argument fell outside its admissible range.
    #[error("{name} must satisfy {constraint}, got {value}")]
    OutOfRange {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },

    /// An integration interval with lo > hi or a forbidden infinite endpoint.
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    /// A coherent-state ensemble whose weights are negative, non-normalized or empty.
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    /// Adaptive quadrature exhausted its subdivision budget. The best estimate
    /// obtained so far and its error bound are carried along.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (best estimate {estimate:e}, error bound {error_bound:e})"
    )]
    QuadratureDidNotConverge {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
