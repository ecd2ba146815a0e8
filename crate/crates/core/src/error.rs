use thiserror::Error;

use crate::ZeroKind;

/// Errors produced by the evaluators, the symbolic pipeline and the zero finders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    /// The requested point lies outside the asymptotic regime the routine is valid in.
    #[error("regime error: {0}")]
    Regime(String),

    #[error("no sign change found for {kind:?} zero k={k} (nu={nu}, delta={delta})")]
    BracketFailure {
        kind: ZeroKind,
        nu: f64,
        delta: f64,
        k: usize,
    },

    #[error("zero refinement did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("series error: {0}")]
    Series(String),

    /// The independent oracle could not reach a trustworthy precision at this point.
    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
