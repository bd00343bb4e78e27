use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The argument is valid mathematically but outside the supported range.
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    /// A quadrature or series did not reach its tolerance within budget.
    #[error("non-convergent: {0}")]
    NonConvergent(String),
    /// A series was requested outside its region of convergence.
    #[error("divergent series: {0}")]
    DivergentSeries(String),
    /// A result cannot be represented in double precision.
    #[error("overflow: {0}")]
    Overflow(String),
    /// A computation produced NaN or infinity.
    #[error("non-finite result: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn non_convergent(msg: impl Into<String>) -> Self {
        Error::NonConvergent(msg.into())
    }

    pub(crate) fn divergent(msg: impl Into<String>) -> Self {
        Error::DivergentSeries(msg.into())
    }
}
