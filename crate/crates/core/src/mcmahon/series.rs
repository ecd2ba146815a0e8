//! Truncated series `sum_{j=0}^{order} c_j y^j` with polynomial coefficients.
//!
//! In the asymptotic setting `y = 1/x`, so `c_j` multiplies `x^{-j}`.
//! All arithmetic is closed at the fixed truncation order.

use crate::error::{Error, Result};

use super::poly::{BivariatePoly, Coefficient};

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<BivariatePoly<C>>,
}

impl<C: Coefficient> TruncatedSeries<C> {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BivariatePoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, BivariatePoly::one())
    }

    pub fn constant(order: usize, c: BivariatePoly<C>) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `y` (that is, `1/x`).
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = BivariatePoly::one();
        }
        s
    }

    /// Builds from coefficients; entries beyond `order` are dropped, missing ones are zero.
    pub fn from_coeffs(order: usize, coeffs: Vec<BivariatePoly<C>>) -> Self {
        let mut s = Self::zero(order);
        for (j, c) in coeffs.into_iter().enumerate().take(order + 1) {
            s.coeffs[j] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &BivariatePoly<C> {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[BivariatePoly<C>] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, j: usize, c: BivariatePoly<C>) {
        self.coeffs[j] = c;
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        Self::from_coeffs(
            order,
            (0..=order).map(|j| &self.coeffs[j] + &rhs.coeffs[j]).collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        Self::from_coeffs(
            order,
            (0..=order).map(|j| &self.coeffs[j] - &rhs.coeffs[j]).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
            }
        }
        out
    }

    pub fn scale(&self, p: &BivariatePoly<C>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }

    /// Multiplication by `y^n`, truncated.
    pub fn shift(&self, n: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for j in 0..=order {
            if j + n <= order {
                out.coeffs[j + n] = self.coeffs[j].clone();
            }
        }
        out
    }

    /// Multiplicative inverse; the constant term must be an invertible scalar.
    pub fn inverse(&self) -> Result<Self> {
        let lead = self.coeffs[0]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| {
                Error::Series("inverse needs a nonzero scalar constant term".into())
            })?;
        let inv_lead = C::one() / lead;
        let order = self.order();
        let mut out = Self::zero(order);
        out.coeffs[0] = BivariatePoly::constant(inv_lead.clone());
        for n in 1..=order {
            let mut acc = BivariatePoly::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() || out.coeffs[n - k].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.coeffs[k] * &out.coeffs[n - k]);
            }
            out.coeffs[n] = (-&acc).scale(&inv_lead);
        }
        Ok(out)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inverse()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluates `sum_j a_j s^j` for a series `s` without constant term.
    pub fn compose_power_series(a: &[C], s: &Self) -> Result<Self> {
        if !s.coeffs[0].is_zero() {
            return Err(Error::Series(
                "composition needs an inner series with zero constant term".into(),
            ));
        }
        let order = s.order();
        let mut acc = Self::zero(order);
        for c in a.iter().rev() {
            acc = acc.mul(s);
            acc.coeffs[0] = &acc.coeffs[0] + &BivariatePoly::constant(c.clone());
        }
        Ok(acc)
    }

    /// Evaluates `sum_j d_j s^j` where the `d_j` are polynomials.
    pub fn compose_poly_coeffs(d: &Self, s: &Self) -> Result<Self> {
        if !s.coeffs[0].is_zero() {
            return Err(Error::Series(
                "composition needs an inner series with zero constant term".into(),
            ));
        }
        let order = s.order().min(d.order());
        let mut acc = Self::zero(order);
        for c in d.coeffs.iter().take(order + 1).rev() {
            acc = acc.mul(s);
            acc.coeffs[0] = &acc.coeffs[0] + c;
        }
        Ok(acc)
    }

    /// True when every even-index coefficient vanishes.
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|c| c.is_zero())
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(order, self.coeffs.iter().take(order + 1).cloned().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn c(n: i64) -> BivariatePoly<Rat> {
        BivariatePoly::constant(Rat::from_integer(n.into()))
    }

    #[test]
    fn inverse_of_one_minus_y_is_geometric() {
        let s = TruncatedSeries::from_coeffs(6, vec![c(1), c(-1)]);
        let inv = s.inverse().unwrap();
        for j in 0..=6 {
            assert_eq!(inv.coeff(j), &c(1));
        }
        let back = inv.mul(&s);
        assert_eq!(back, TruncatedSeries::one(6));
    }

    #[test]
    fn inverse_rejects_symbolic_lead() {
        let s = TruncatedSeries::<Rat>::from_coeffs(3, vec![BivariatePoly::mu()]);
        assert!(s.inverse().is_err());
    }

    #[test]
    fn composition_of_geometric_series() {
        // 1/(1-s) with s = y + y^2 : coefficients 1,1,2,3,5,8 (Fibonacci)
        let s = TruncatedSeries::from_coeffs(5, vec![c(0), c(1), c(1)]);
        let ones: Vec<Rat> = vec![Rat::from_integer(1.into()); 6];
        let out = TruncatedSeries::compose_power_series(&ones, &s).unwrap();
        let fib = [1, 1, 2, 3, 5, 8];
        for (j, f) in fib.iter().enumerate() {
            assert_eq!(out.coeff(j), &c(*f));
        }
    }

    #[test]
    fn shift_truncates() {
        let s = TruncatedSeries::from_coeffs(3, vec![c(1), c(2), c(3), c(4)]);
        let t = s.shift(2);
        assert_eq!(t.coeff(0), &c(0));
        assert_eq!(t.coeff(2), &c(1));
        assert_eq!(t.coeff(3), &c(2));
    }
}
