//! Capacity bounds for the free-space optical intensity channel
//! `Y = X + Z`, `X ≥ 0`, `Z ~ N(0, σ²)`, under peak and/or average amplitude
//! constraints.
//!
//! * [`qfunc`]: Gaussian tail function and log-domain helpers.
//! * [`params`]: `μ*` and the default free parameters of the duality bounds.
//! * [`bounds`]: closed-form lower and upper bounds.
//! * [`optimize`]: free-parameter minimization and the best-bound envelope.
//! * [`asymptotics`]: high/low-SNR asymptotes and convergence diagnostics.
//! * [`oracle`]: Blahut–Arimoto and quadrature cross-checks.
//! * [`sweep`] and [`verify`]: the data and check suites behind the `ocb` CLI.

// negated comparisons are how NaN arguments get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod bounds;
pub mod error;
pub mod optimize;
pub mod oracle;
pub mod params;
pub mod qfunc;
pub mod sweep;
pub mod verify;

pub use bounds::{case_of, BoundEstimate, CaseTag, ConstraintSpec, Formula, Side};
pub use error::{Error, Result};
pub use optimize::{envelope, Envelope, OptResult};

/// `10·log10(ratio)`.
pub fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// Inverse of [`to_db`].
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
