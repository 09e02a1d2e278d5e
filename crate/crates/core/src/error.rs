use alloc::boxed::Box;
use alloc::string::String;

use crate::real::Real;

/// Failure modes of the numerical pipeline.
#[derive(Debug, Clone, thiserror::Error)]
pub enum LabError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0} is outside the domain of the function")]
    Domain(String),

    #[error("{0}")]
    Unsupported(&'static str),

    #[error("quadrature did not converge by level {level}: best estimate {estimate}, achieved bound {bound}")]
    Quadrature {
        estimate: Real,
        bound: Real,
        level: u32,
    },

    #[error("Hankel pivot {order} is not positive at {bits} bits; increase the working precision")]
    Precision { order: usize, bits: usize },

    #[error("finite-difference stencil around t = {0} reaches t <= 0")]
    Stencil(Real),

    #[error("moment routes disagree at k = {k}: |quad - kummer| = {difference} exceeds combined bound {bound}")]
    RouteDisagreement {
        k: i64,
        difference: Real,
        bound: Real,
    },

    #[error("missing data: {0}")]
    Missing(String),

    #[error("{context}: {source}")]
    Context { context: String, source: Box<LabError> },
}

impl LabError {
    /// Wraps the error with a description of where it happened.
    pub fn within(self, context: impl Into<String>) -> Self {
        LabError::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, below any context wrappers.
    pub fn root(&self) -> &LabError {
        match self {
            LabError::Context { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = LabError> = core::result::Result<T, E>;
