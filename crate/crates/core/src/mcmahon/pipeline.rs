//! From Hankel's expansion to the reverted zero series.
//!
//! Writing `chi = x - (nu/2 + 1/4) pi`, Hankel's expansions give
//!
//! ```text
//! sqrt(pi x / 2) x^delta y'_{nu,delta}(x) = (R - delta Q / x) cos chi - (S + delta P / x) sin chi
//! ```
//!
//! so a zero satisfies `cot chi = T` with `T = (S + delta P/x) / (R - delta Q/x)`,
//! i.e. `b' = beta' + arccot(T) - pi/2 = beta' - arctan(T)`. Reverting this
//! implicit relation in powers of `1/beta'` yields the McMahon-type coefficients.

use crate::error::{Error, Result};

use super::poly::{BivariatePoly, Coefficient};
use super::series::TruncatedSeries;

/// `A_s = prod_{i=1}^{s} (mu - (2i-1)^2) / (s! 8^s)`, with `A_0 = 1`.
pub fn hankel_a<C: Coefficient>(s: usize) -> BivariatePoly<C> {
    let mut p = BivariatePoly::one();
    let mut denom = C::one();
    for i in 1..=s {
        let odd = (2 * i - 1) as i64;
        let factor = &BivariatePoly::mu() - &BivariatePoly::constant(C::from_i64(odd * odd));
        p = &p * &factor;
        denom = denom * C::from_i64(8 * i as i64);
    }
    p.scale(&(C::one() / denom))
}

/// The `R`/`S` coefficient `((mu + 4k^2 - 1)/(mu - (2k-1)^2)) A_k`.
///
/// Built as an exact quotient so that a non-cancelling pole is an error
/// rather than a silently wrong polynomial.
pub fn hankel_derivative_coeff<C: Coefficient>(k: usize) -> Result<BivariatePoly<C>> {
    if k == 0 {
        return Ok(BivariatePoly::one());
    }
    let kk = k as i64;
    let odd = 2 * kk - 1;
    let numerator = &(&BivariatePoly::mu() + &BivariatePoly::constant(C::from_i64(4 * kk * kk - 1)))
        * &hankel_a::<C>(k);
    numerator.div_mu_minus(&C::from_i64(odd * odd))
}

/// Hankel auxiliary series `P, Q, R, S` in powers of `1/x`.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelSeries<C> {
    pub p: TruncatedSeries<C>,
    pub q: TruncatedSeries<C>,
    pub r: TruncatedSeries<C>,
    pub s: TruncatedSeries<C>,
}

fn alternating_sign(j: usize) -> i64 {
    // (-1)^{floor(j/2)}: +,+,-,-,+,+,...
    if (j / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn pqrs_series<C: Coefficient>(order: usize) -> Result<HankelSeries<C>> {
    if order == 0 {
        return Err(Error::Series("pqrs_series needs order >= 1".into()));
    }
    let mut p = TruncatedSeries::zero(order);
    let mut q = TruncatedSeries::zero(order);
    let mut r = TruncatedSeries::zero(order);
    let mut s = TruncatedSeries::zero(order);
    for j in 0..=order {
        let sign = C::from_i64(alternating_sign(j));
        let a = hankel_a::<C>(j).scale(&sign);
        let d = hankel_derivative_coeff::<C>(j)?.scale(&sign);
        if j % 2 == 0 {
            p.set_coeff(j, a);
            r.set_coeff(j, d);
        } else {
            q.set_coeff(j, a);
            s.set_coeff(j, d);
        }
    }
    Ok(HankelSeries { p, q, r, s })
}

/// `T = (S + delta P / x) / (R - delta Q / x)`.
pub fn t_series<C: Coefficient>(order: usize) -> Result<TruncatedSeries<C>> {
    let h = pqrs_series::<C>(order)?;
    let delta = BivariatePoly::delta();
    let num = h.s.add(&h.p.shift(1).scale(&delta));
    let den = h.r.sub(&h.q.shift(1).scale(&delta));
    num.div(&den)
}

/// `arctan(T) = T - T^3/3 + T^5/5 - ...`, truncated at the order of `t`.
pub fn arctan_series<C: Coefficient>(t: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>> {
    let order = t.order();
    let coeffs: Vec<C> = (0..=order)
        .map(|n| {
            if n % 2 == 0 {
                C::zero()
            } else {
                let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
                C::from_i64(sign) / C::from_i64(n as i64)
            }
        })
        .collect();
    TruncatedSeries::compose_power_series(&coeffs, t)
}

/// Displacement of the zero from `beta'`: `arccot(T) - pi/2 = -arctan(T)`.
///
/// With it, `b' = beta' + arccot_compose(T)(b')`; its `x^{-3}` coefficient is
/// `-B_3 + B_1^3/3` and its `x^{-5}` coefficient is `-B_5 + B_1^2 B_3 - B_1^5/5`.
pub fn arccot_compose<C: Coefficient>(t: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>> {
    if !t.coeff(0).is_zero() {
        return Err(Error::Series(
            "arccot expansion at 0 needs T with zero constant term".into(),
        ));
    }
    Ok(arctan_series(t)?.neg())
}

/// Reverts `b = beta + sum_j d_j b^{-j}` into `b = beta + sum_j c_j beta^{-j}`.
///
/// `rhs` holds the `d_j` (with `d_0 = 0`); the result holds the `c_j` as a
/// series in `1/beta`. Iterated re-substitution: each pass fixes at least one
/// more order, and the loop stops at the fixed point.
pub fn revert_series<C: Coefficient>(rhs: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>> {
    if !rhs.coeff(0).is_zero() {
        return Err(Error::Series("reversion needs d_0 = 0".into()));
    }
    let order = rhs.order();
    let mut c = TruncatedSeries::zero(order);
    for _ in 0..=order + 1 {
        // 1/b = w / (1 + w C(w))
        let inv_b = TruncatedSeries::one(order).add(&c.shift(1)).inverse()?.shift(1);
        let next = TruncatedSeries::compose_poly_coeffs(rhs, &inv_b)?;
        if next == c {
            return Ok(c);
        }
        c = next;
    }
    Err(Error::Series("series reversion failed to reach a fixed point".into()))
}

/// Full pipeline: coefficients `c_j`, `j <= order`, of the zero series in `1/beta'`.
pub fn zero_series<C: Coefficient>(order: usize) -> Result<TruncatedSeries<C>> {
    let order = order.max(1);
    let t = t_series::<C>(order)?;
    let d = arccot_compose(&t)?;
    revert_series(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn poly(terms: &[(u32, u32, i64)], scale: Rat) -> BivariatePoly<Rat> {
        BivariatePoly::from_integer_terms(terms).scale(&scale)
    }

    #[test]
    fn hankel_a_small_cases() {
        assert_eq!(hankel_a::<Rat>(1), poly(&[(1, 0, 1), (0, 0, -1)], r(1, 8)));
        assert_eq!(
            hankel_a::<Rat>(2),
            poly(&[(2, 0, 1), (1, 0, -10), (0, 0, 9)], r(1, 128))
        );
        // (-1)(-9)(-25)/(6*512)
        assert_eq!(hankel_a::<Rat>(3).eval_exact(&r(0, 1), &r(0, 1)), r(-75, 1024));
    }

    #[test]
    fn auxiliary_series_match_printed_displays() {
        let h = pqrs_series::<Rat>(7).unwrap();
        assert_eq!(h.p.coeff(0), &BivariatePoly::one());
        assert_eq!(h.p.coeff(2), &-&hankel_a::<Rat>(2));
        assert_eq!(h.p.coeff(4), &hankel_a::<Rat>(4));
        assert_eq!(h.q.coeff(1), &hankel_a::<Rat>(1));
        assert_eq!(h.q.coeff(3), &-&hankel_a::<Rat>(3));
        // S_1 = ((mu+3)/(mu-1)) A_1 = (mu+3)/8
        assert_eq!(h.s.coeff(1), &poly(&[(1, 0, 1), (0, 0, 3)], r(1, 8)));
        // R_2 = -(mu+15)(mu-1)/128 vanishes at mu = 1
        assert_eq!(
            h.r.coeff(2),
            &poly(&[(2, 0, -1), (1, 0, -14), (0, 0, 15)], r(1, 128))
        );
        assert!(h.r.coeff(2).eval_exact(&r(1, 1), &r(0, 1)) == r(0, 1));
        assert!(h.p.is_even() && h.r.is_even() && h.q.is_odd() && h.s.is_odd());
    }

    #[test]
    fn t_series_is_odd_with_b1_leading() {
        let t = t_series::<Rat>(7).unwrap();
        assert!(t.is_odd());
        // B_1 = (mu+3)/8 + delta
        let b1 = BivariatePoly::from_terms([(1, 0, r(1, 8)), (0, 0, r(3, 8)), (0, 1, r(1, 1))]);
        assert_eq!(t.coeff(1), &b1);
        assert_eq!(t.coeff(1).eval_exact(&r(1, 1), &r(0, 1)), r(1, 2));
    }

    #[test]
    fn t_series_b3_matches_printed_formula() {
        // B_3 = -((mu+35)/(mu-25)) A_3 - delta A_2 + B_1 (((mu+15)/(mu-9)) A_2 + delta A_1)
        // evaluated independently at several rational points.
        let t = t_series::<Rat>(5).unwrap();
        let a = |s: usize, mu: &Rat| hankel_a::<Rat>(s).eval_exact(mu, &r(0, 1));
        for (mu, d) in [(r(0, 1), r(0, 1)), (r(7, 3), r(-2, 5)), (r(100, 1), r(3, 2))] {
            let b1 = (&mu + r(3, 1)) / (&mu - r(1, 1)) * a(1, &mu) + &d;
            let b3 = -(&mu + r(35, 1)) / (&mu - r(25, 1)) * a(3, &mu) - &d * a(2, &mu)
                + &b1 * ((&mu + r(15, 1)) / (&mu - r(9, 1)) * a(2, &mu) + &d * a(1, &mu));
            assert_eq!(t.coeff(3).eval_exact(&mu, &d), b3);
        }
    }

    #[test]
    fn arctan_of_single_term() {
        let t = TruncatedSeries::from_coeffs(
            5,
            vec![BivariatePoly::zero(), BivariatePoly::constant(r(2, 1))],
        );
        let a = arctan_series(&t).unwrap();
        assert_eq!(a.coeff(3), &BivariatePoly::constant(r(-8, 3)));
        let d = arccot_compose(&t).unwrap();
        assert_eq!(d.coeff(1), &BivariatePoly::constant(r(-2, 1)));
        assert_eq!(d.coeff(3), &BivariatePoly::constant(r(8, 3)));
    }

    #[test]
    fn arccot_rejects_constant_term() {
        let t = TruncatedSeries::<Rat>::one(3);
        assert!(arccot_compose(&t).is_err());
    }

    #[test]
    fn displacement_matches_b_combinations() {
        let t = t_series::<Rat>(5).unwrap();
        let d = arccot_compose(&t).unwrap();
        let b1 = t.coeff(1);
        let b3 = t.coeff(3);
        let b5 = t.coeff(5);
        let third = BivariatePoly::constant(r(1, 3));
        let fifth = BivariatePoly::constant(r(1, 5));
        let expect3 = &(&b1.pow(3) * &third) - b3;
        assert_eq!(d.coeff(3), &expect3);
        let expect5 = &(&-b5 + &(&b1.pow(2) * b3)) - &(&b1.pow(5) * &fifth);
        assert_eq!(d.coeff(5), &expect5);
    }

    #[test]
    fn single_term_reversion() {
        let dcoef = BivariatePoly::<Rat>::delta();
        let rhs = TruncatedSeries::from_coeffs(5, vec![BivariatePoly::zero(), dcoef.clone()]);
        let c = revert_series(&rhs).unwrap();
        assert_eq!(c.coeff(1), &dcoef);
        assert_eq!(c.coeff(3), &-&dcoef.pow(2));
        // b = (beta + sqrt(beta^2 + 4d))/2: Catalan numbers 1, 1, 2
        assert_eq!(c.coeff(5), &dcoef.pow(3).scale(&r(2, 1)));
    }

    #[test]
    fn float_pipeline_tracks_exact_pipeline() {
        let exact = zero_series::<Rat>(5).unwrap();
        let float = zero_series::<f64>(5).unwrap();
        for j in [1usize, 3, 5] {
            for (mu, d) in [(0.0f64, 0.0f64), (4.0, 0.5), (54.76, -1.0)] {
                let e = exact.coeff(j).eval(mu, d);
                let f = float.coeff(j).eval(mu, d);
                assert!((e - f).abs() <= 1e-9 * e.abs().max(1.0), "j={j}: {e} vs {f}");
            }
        }
    }
}
