//! Symbolic derivation of McMahon-type expansions for the zeros of
//! ultraspherical Bessel derivatives.

pub mod golden;
pub mod pipeline;
pub mod poly;
pub mod series;
pub mod table;

pub use pipeline::{
    arccot_compose, arctan_series, hankel_a, hankel_derivative_coeff, pqrs_series,
    revert_series, t_series, zero_series, HankelSeries,
};
pub use golden::{golden_checks, GoldenCheck};
pub use poly::{BivariatePoly, Coefficient, Monomial, NumericPoly};
pub use series::TruncatedSeries;
pub use table::{
    beta_offset, derived_coefficients, eval_expansion, expansion_table, CoefficientExport,
    ExpansionAt, ExpansionTable, ExportedCoefficient, NumericExpansion, MAX_ORDER,
};
