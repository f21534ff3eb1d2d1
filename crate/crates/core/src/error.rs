use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} exceeds the limit {limit} (requested {requested})")]
    CostGuard {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    #[error("quadrature did not converge; last two estimates {coarse:e} and {fine:e}")]
    NotConverged { coarse: f64, fine: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("volume-order regime: lambda_D + I(0) = {defect:e} is nonzero; use the volume limit instead")]
    VolumeOrderRegime { defect: f64 },

    #[error("support violation: the statistic needs a window of radius {required}, the usable radius is {available}")]
    SupportViolation { required: f64, available: f64 },

    #[error("identity mismatch at order {order}: {detail}")]
    IdentityMismatch { order: usize, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
