pub mod dd;
pub mod error;
pub mod mcmahon;
pub mod phase;
pub mod scalar;
pub mod specfun;
pub mod zeros;

pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use scalar::Real;

/// Exact rational coefficient type of the symbolic pipeline.
pub type Rat = num_rational::BigRational;
/// Polynomial in `mu = 4 nu^2` and `delta` with exact coefficients.
pub type MuDeltaPoly = mcmahon::BivariatePoly<Rat>;
/// Truncated asymptotic series in `1/x` with exact polynomial coefficients.
pub type AsymSeries = mcmahon::TruncatedSeries<Rat>;
/// Expansion evaluated in hardware floating point.
pub type Expansion64 = mcmahon::NumericExpansion<f64>;
/// Expansion evaluated in double-double arithmetic.
pub type ExpansionDd = mcmahon::NumericExpansion<DoubleDouble>;

/// Which derivative's zeros: `AZero` for `j'_{nu,delta}`, `BZero` for `y'_{nu,delta}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ZeroKind {
    AZero,
    BZero,
}
