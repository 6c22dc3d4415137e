use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter or configuration value violates its domain constraint.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// The adaptive integrator ran out of panels. Carries the best estimate
    /// obtained so far together with its error bound.
    #[error("quadrature did not converge within {panels} panels (best estimate {value}, error bound {error_estimate:e})")]
    Convergence {
        value: Complex64,
        error_estimate: f64,
        panels: usize,
    },
    /// A lifetime fit could not be performed on the given data.
    #[error("fit failed: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn fit(msg: impl Into<String>) -> Self {
        Error::Fit(msg.into())
    }
}
