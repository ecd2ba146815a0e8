//! Bivariate polynomials in `mu` and `delta`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Coefficient field of the symbolic pipeline.
///
/// The pipeline is written once over this trait and instantiated with exact
/// rationals for the golden derivation; `f64` is also supported for quick
/// numeric cross-checks.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    fn from_i64(n: i64) -> Self;
    fn to_real<T: Real>(&self) -> T;
    fn to_rational(&self) -> Option<BigRational>;
    /// Whether a division remainder counts as zero, given the magnitude of
    /// the dividend; exact types demand an exact zero.
    fn is_negligible(&self, reference: f64) -> bool;
}

impl Coefficient for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn to_real<T: Real>(&self) -> T {
        T::from_rational(self)
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn is_negligible(&self, _reference: f64) -> bool {
        self.is_zero()
    }
}

impl Coefficient for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn to_real<T: Real>(&self) -> T {
        T::from_f64_lossless(*self)
    }
    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }
    fn is_negligible(&self, reference: f64) -> bool {
        self.abs() <= 1e-12 * reference
    }
}

/// Sparse polynomial `sum c_{ij} mu^i delta^j`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct BivariatePoly<C> {
    terms: BTreeMap<(u32, u32), C>,
}

/// One stored monomial, as serialized in coefficient exports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub mu_exp: u32,
    pub delta_exp: u32,
    pub num: String,
    pub den: String,
}

impl<C: Coefficient> BivariatePoly<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn mu() -> Self {
        Self::monomial(1, 0, C::one())
    }

    pub fn delta() -> Self {
        Self::monomial(0, 1, C::one())
    }

    pub fn monomial(mu_exp: u32, delta_exp: u32, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(mu_exp, delta_exp, c);
        p
    }

    /// Builds from `(mu_exp, delta_exp, coefficient)` triples; repeated exponents add up.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, C)>) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, mu_exp: u32, delta_exp: u32, c: C) {
        if c.is_zero() {
            return;
        }
        let key = (mu_exp, delta_exp);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &C)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mu_exp: u32, delta_exp: u32) -> C {
        self.terms
            .get(&(mu_exp, delta_exp))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// The value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn degree_mu(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_delta(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms().map(|(i, j, v)| (i, j, v.clone() * c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Exact division by the linear factor `(mu - root)`.
    ///
    /// Fails unless the remainder vanishes identically in `delta`, which is
    /// how the apparent poles of the Hankel auxiliary series are shown to cancel.
    pub fn div_mu_minus(&self, root: &C) -> Result<Self> {
        let mut quotient = Self::zero();
        let by_delta = self.group_by_delta();
        for (j, coeffs) in by_delta {
            // synthetic division of sum_i coeffs[i] mu^i by (mu - root)
            let deg = coeffs.len() - 1;
            let r = root.to_real::<f64>().abs();
            let reference: f64 = coeffs
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * r + c.to_real::<f64>().abs());
            let mut carry = C::zero();
            let mut q = vec![C::zero(); deg.max(1)];
            for i in (0..=deg).rev() {
                let v = coeffs[i].clone() + carry.clone() * root.clone();
                if i == 0 {
                    if !v.is_negligible(reference) {
                        return Err(Error::Series(format!(
                            "(mu - {root:?}) does not divide the delta^{j} part"
                        )));
                    }
                } else {
                    q[i - 1] = v.clone();
                    carry = v;
                }
            }
            for (i, c) in q.into_iter().enumerate() {
                quotient.add_term(i as u32, j, c);
            }
        }
        Ok(quotient)
    }

    fn group_by_delta(&self) -> BTreeMap<u32, Vec<C>> {
        let mut out: BTreeMap<u32, Vec<C>> = BTreeMap::new();
        for (i, j, c) in self.terms() {
            let v = out.entry(j).or_default();
            if v.len() <= i as usize {
                v.resize(i as usize + 1, C::zero());
            }
            v[i as usize] = c.clone();
        }
        out
    }

    /// Substitutes `delta = value`, leaving a polynomial in `mu` alone.
    pub fn substitute_delta(&self, value: &C) -> Self {
        let mut out = Self::zero();
        for (i, j, c) in self.terms() {
            let mut v = c.clone();
            for _ in 0..j {
                v = v * value.clone();
            }
            out.add_term(i, 0, v);
        }
        out
    }

    /// Substitutes `mu = value`, leaving a polynomial in `delta` alone.
    pub fn substitute_mu(&self, value: &C) -> Self {
        let mut out = Self::zero();
        for (i, j, c) in self.terms() {
            let mut v = c.clone();
            for _ in 0..i {
                v = v * value.clone();
            }
            out.add_term(0, j, v);
        }
        out
    }

    pub fn eval_exact(&self, mu: &C, delta: &C) -> C {
        self.substitute_delta(delta)
            .substitute_mu(mu)
            .as_constant()
            .expect("fully substituted")
    }

    /// Numeric evaluation; coefficients are rounded to `T` once.
    pub fn eval<T: Real>(&self, mu: T, delta: T) -> T {
        NumericPoly::from_poly(self).eval(mu, delta)
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> BivariatePoly<D> {
        BivariatePoly::from_terms(self.terms().map(|(i, j, c)| (i, j, f(c))))
    }
}

impl BivariatePoly<BigRational> {
    pub fn from_integer_terms(terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(i, j, c)| (i, j, BigRational::from_integer(BigInt::from(c)))),
        )
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms()
            .map(|(i, j, c)| Monomial {
                mu_exp: i,
                delta_exp: j,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect()
    }

    pub fn from_monomials(monomials: &[Monomial]) -> Result<Self> {
        let mut p = Self::zero();
        for m in monomials {
            let num: BigInt = m
                .num
                .parse()
                .map_err(|_| Error::Series(format!("bad numerator {:?}", m.num)))?;
            let den: BigInt = m
                .den
                .parse()
                .map_err(|_| Error::Series(format!("bad denominator {:?}", m.den)))?;
            if den.is_zero() {
                return Err(Error::Series("zero denominator".into()));
            }
            p.add_term(m.mu_exp, m.delta_exp, BigRational::new(num, den));
        }
        Ok(p)
    }

    /// Least common denominator of all coefficients.
    pub fn common_denominator(&self) -> BigInt {
        self.terms().fold(BigInt::one(), |acc, (_, _, c)| {
            num_integer::Integer::lcm(&acc, c.denom())
        })
    }
}

/// A polynomial whose coefficients were rounded once into a working precision.
#[derive(Clone, Debug)]
pub struct NumericPoly<T> {
    terms: Vec<(u32, u32, T)>,
}

impl<T: Real> NumericPoly<T> {
    pub fn from_poly<C: Coefficient>(p: &BivariatePoly<C>) -> Self {
        Self {
            terms: p.terms().map(|(i, j, c)| (i, j, c.to_real::<T>())).collect(),
        }
    }

    pub fn eval(&self, mu: T, delta: T) -> T {
        let mut acc = T::zero();
        for &(i, j, c) in &self.terms {
            acc += c * mu.powi(i as i32) * delta.powi(j as i32);
        }
        acc
    }
}

impl<'a, C: Coefficient> Add for &'a BivariatePoly<C> {
    type Output = BivariatePoly<C>;
    fn add(self, rhs: Self) -> BivariatePoly<C> {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl<'a, C: Coefficient> Sub for &'a BivariatePoly<C> {
    type Output = BivariatePoly<C>;
    fn sub(self, rhs: Self) -> BivariatePoly<C> {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl<'a, C: Coefficient> Mul for &'a BivariatePoly<C> {
    type Output = BivariatePoly<C>;
    fn mul(self, rhs: Self) -> BivariatePoly<C> {
        let mut out = BivariatePoly::zero();
        for (i1, j1, c1) in self.terms() {
            for (i2, j2, c2) in rhs.terms() {
                out.add_term(i1 + i2, j1 + j2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<'a, C: Coefficient> Neg for &'a BivariatePoly<C> {
    type Output = BivariatePoly<C>;
    fn neg(self) -> BivariatePoly<C> {
        BivariatePoly::from_terms(self.terms().map(|(i, j, c)| (i, j, -c.clone())))
    }
}

impl fmt::Display for BivariatePoly<BigRational> {
    /// Human-readable form, highest `mu` power first, e.g. `-1/8*mu - delta - 3/8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors = Vec::new();
            if !(mag.is_one() && (i > 0 || j > 0)) {
                factors.push(mag.to_string());
            }
            match i {
                0 => {}
                1 => factors.push("mu".to_string()),
                _ => factors.push(format!("mu^{i}")),
            }
            match j {
                0 => {}
                1 => factors.push("delta".to_string()),
                _ => factors.push(format!("delta^{j}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
