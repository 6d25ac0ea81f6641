use thiserror::Error;

use crate::oracle::BaOutcome;

/// Errors raised by the bound evaluators, solvers and the numerical oracle.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// Blahut–Arimoto ran out of iterations. The last iterate is kept for diagnosis.
    #[error("Blahut-Arimoto did not converge after {iterations} iterations (last increment {last_increment:e} nats)")]
    NonConvergence {
        iterations: usize,
        last_increment: f64,
        last: Box<BaOutcome>,
    },

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        op,
        reason: reason.into(),
    }
}
