//! Expansion tables: the derived coefficients packaged per zero kind.

use std::sync::Mutex;

use num_bigint::BigInt;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::{Rat, ZeroKind};

use super::pipeline::zero_series;
use super::poly::{BivariatePoly, Monomial, NumericPoly};
use super::series::TruncatedSeries;

/// Highest expansion order served by [`expansion_table`].
pub const MAX_ORDER: usize = 8;

/// `zero ~ beta' + sum_{i=1}^{order} c_{2i-1}(mu, delta) / beta'^{2i-1}`,
/// with `beta' = (k + nu/2 + beta_offset) pi` and `mu = 4 nu^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionTable {
    pub kind: ZeroKind,
    pub order: usize,
    pub beta_offset: Rat,
    /// `(power, c_power)` for the odd powers `1, 3, ..., 2 order - 1`.
    pub coefficients: Vec<(usize, BivariatePoly<Rat>)>,
}

pub fn beta_offset(kind: ZeroKind) -> Rat {
    match kind {
        ZeroKind::AZero => Rat::new(BigInt::from(-3), BigInt::from(4)),
        ZeroKind::BZero => Rat::new(BigInt::from(-1), BigInt::from(4)),
    }
}

static DERIVED: Lazy<Mutex<Option<TruncatedSeries<Rat>>>> = Lazy::new(|| Mutex::new(None));

/// Exact zero-series coefficients up to `x^{-(2 order - 1)}`, cached.
///
/// The coefficients do not depend on the kind: the two kinds differ only in
/// the phase of `beta'`.
pub fn derived_coefficients(order: usize) -> Result<TruncatedSeries<Rat>> {
    let top = (2 * order).saturating_sub(1).max(1);
    let mut guard = DERIVED.lock().map_err(|_| Error::Series("coefficient cache poisoned".into()))?;
    if let Some(series) = guard.as_ref() {
        if series.order() >= top {
            return Ok(series.truncate(top));
        }
    }
    let series = zero_series::<Rat>(top)?;
    *guard = Some(series.clone());
    Ok(series)
}

pub fn expansion_table(kind: ZeroKind, order: usize) -> Result<ExpansionTable> {
    if order > MAX_ORDER {
        return Err(Error::Domain(format!(
            "expansion order {order} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    let series = derived_coefficients(order)?;
    let coefficients = (1..=order)
        .map(|i| {
            let p = 2 * i - 1;
            (p, series.coeff(p).clone())
        })
        .collect();
    Ok(ExpansionTable {
        kind,
        order,
        beta_offset: beta_offset(kind),
        coefficients,
    })
}

impl ExpansionTable {
    pub fn coefficient(&self, power: usize) -> Option<&BivariatePoly<Rat>> {
        self.coefficients
            .iter()
            .find(|(p, _)| *p == power)
            .map(|(_, c)| c)
    }

    pub fn to_numeric<T: Real>(&self) -> NumericExpansion<T> {
        NumericExpansion {
            beta_offset: T::from_rational(&self.beta_offset),
            coefficients: self
                .coefficients
                .iter()
                .map(|(p, c)| (*p, NumericPoly::from_poly(c)))
                .collect(),
        }
    }

    pub fn export(&self) -> CoefficientExport {
        CoefficientExport {
            kind: self.kind,
            order: self.order,
            beta_offset: self.beta_offset.to_string(),
            coefficients: self
                .coefficients
                .iter()
                .map(|(p, c)| ExportedCoefficient {
                    power: *p,
                    poly: c.monomials(),
                })
                .collect(),
        }
    }

    pub fn from_export(e: &CoefficientExport) -> Result<Self> {
        let beta_offset: Rat = e
            .beta_offset
            .parse()
            .map_err(|_| Error::Series(format!("bad beta offset {:?}", e.beta_offset)))?;
        let coefficients = e
            .coefficients
            .iter()
            .map(|c| Ok((c.power, BivariatePoly::from_monomials(&c.poly)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kind: e.kind,
            order: e.order,
            beta_offset,
            coefficients,
        })
    }
}

/// Serializable form of an [`ExpansionTable`]; rationals are kept as strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientExport {
    pub kind: ZeroKind,
    pub order: usize,
    pub beta_offset: String,
    pub coefficients: Vec<ExportedCoefficient>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportedCoefficient {
    pub power: usize,
    pub poly: Vec<Monomial>,
}

/// An expansion table with coefficients rounded to `T`.
#[derive(Clone, Debug)]
pub struct NumericExpansion<T> {
    pub beta_offset: T,
    pub coefficients: Vec<(usize, NumericPoly<T>)>,
}

impl<T: Real> NumericExpansion<T> {
    /// Fixes `(nu, delta)`; the result evaluates the expansion for any `k`.
    pub fn at(&self, nu: T, delta: T) -> ExpansionAt<T> {
        let mu = T::from_f64_lossless(4.0) * nu * nu;
        ExpansionAt {
            phase: nu / T::from_f64_lossless(2.0) + self.beta_offset,
            terms: self
                .coefficients
                .iter()
                .map(|(p, c)| (*p as i32, c.eval(mu, delta)))
                .collect(),
        }
    }

    pub fn eval(&self, nu: T, delta: T, k: T) -> T {
        self.at(nu, delta).eval(k)
    }
}

/// Expansion specialised to one `(nu, delta)`.
#[derive(Clone, Debug)]
pub struct ExpansionAt<T> {
    phase: T,
    terms: Vec<(i32, T)>,
}

impl<T: Real> ExpansionAt<T> {
    pub fn beta(&self, k: T) -> T {
        (k + self.phase) * T::PI()
    }

    pub fn eval(&self, k: T) -> T {
        let beta = self.beta(k);
        let inv = T::one() / beta;
        self.terms
            .iter()
            .fold(beta, |acc, (p, c)| acc + *c * inv.powi(*p))
    }

    /// Individual terms `c_j / beta'^j`, leading `beta'` first.
    pub fn terms(&self, k: T) -> Vec<T> {
        let beta = self.beta(k);
        let inv = T::one() / beta;
        std::iter::once(beta)
            .chain(self.terms.iter().map(|(p, c)| *c * inv.powi(*p)))
            .collect()
    }
}

/// `f64` evaluation of a table at `(nu, delta, k)`; `k` may be fractional.
pub fn eval_expansion(table: &ExpansionTable, nu: f64, delta: f64, k: f64) -> f64 {
    table.to_numeric::<f64>().eval(nu, delta, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn order_one_value() {
        let t = expansion_table(ZeroKind::AZero, 1).unwrap();
        let b = PI / 4.0;
        let expect = b - 3.0 / (8.0 * b);
        assert!((eval_expansion(&t, 0.0, 0.0, 1.0) - expect).abs() < 1e-15);
    }

    #[test]
    fn kinds_share_coefficients() {
        let a = expansion_table(ZeroKind::AZero, 4).unwrap();
        let b = expansion_table(ZeroKind::BZero, 4).unwrap();
        assert_eq!(a.coefficients, b.coefficients);
        assert_ne!(a.beta_offset, b.beta_offset);
    }

    #[test]
    fn order_zero_is_bare_phase() {
        let t = expansion_table(ZeroKind::BZero, 0).unwrap();
        assert!(t.coefficients.is_empty());
        assert!((eval_expansion(&t, 1.0, 0.0, 2.0) - 2.25 * PI).abs() < 1e-14);
    }

    #[test]
    fn export_roundtrip() {
        let t = expansion_table(ZeroKind::BZero, 3).unwrap();
        let json = serde_json::to_string(&t.export()).unwrap();
        let back: CoefficientExport = serde_json::from_str(&json).unwrap();
        assert_eq!(ExpansionTable::from_export(&back).unwrap(), t);
    }

    #[test]
    fn highest_order_series_is_odd() {
        let s = derived_coefficients(MAX_ORDER).unwrap();
        assert_eq!(s.order(), 2 * MAX_ORDER - 1);
        assert!(s.is_odd());
        assert_eq!(s.coeff(15).degree_mu(), 8);
    }

    #[test]
    fn rejects_excess_order() {
        assert!(expansion_table(ZeroKind::AZero, MAX_ORDER + 1).is_err());
    }
}
