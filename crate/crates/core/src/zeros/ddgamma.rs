//! Gamma function in double-double arithmetic (Stirling series after an
//! upward shift, reflection below 1/2).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::dd::DoubleDouble;
use crate::scalar::Real;

type Dd = DoubleDouble;

const STIRLING_TERMS: usize = 20;
const SHIFT_TO: f64 = 25.0;

/// `B_{2k} / (2k (2k - 1))` for `k = 1..=STIRLING_TERMS`.
static STIRLING: Lazy<Vec<Dd>> = Lazy::new(|| {
    let n = 2 * STIRLING_TERMS;
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    (1..=STIRLING_TERMS)
        .map(|k| {
            let d = BigInt::from(2 * k * (2 * k - 1));
            Dd::from_rational_exact(&(&b[2 * k] / BigRational::from_integer(d)))
        })
        .collect()
});

/// `ln Gamma(z)` for `z >= 1/2`.
pub fn ln_gamma(z: Dd) -> Dd {
    let mut w = z;
    let mut prod = Dd::ONE;
    let mut log_shift = Dd::ZERO;
    while w.hi() < SHIFT_TO {
        prod *= w;
        w = w + Dd::ONE;
        if prod.hi() > 1e250 {
            log_shift += prod.ln();
            prod = Dd::ONE;
        }
    }
    log_shift += prod.ln();
    let half_ln_2pi = (Dd::pi() * Dd::from(2.0)).ln() * Dd::from(0.5);
    let inv = Dd::ONE / w;
    let inv2 = inv * inv;
    let mut series = Dd::ZERO;
    let mut p = inv;
    for c in STIRLING.iter() {
        series += *c * p;
        p *= inv2;
    }
    (w - Dd::from(0.5)) * w.ln() - w + half_ln_2pi + series - log_shift
}

/// `sin(pi z)` with exact reduction of `z` to `[-1/2, 1/2]`.
pub fn sin_pi(z: Dd) -> Dd {
    let n = z.round();
    let r = z - n;
    let s = (Dd::pi() * r).sin();
    let odd = (n.hi() as i64 + n.lo() as i64).rem_euclid(2) == 1;
    if odd {
        -s
    } else {
        s
    }
}

/// `1/Gamma(z)` for any real `z` (zero at non-positive integers).
#[cfg(test)]
pub fn rgamma(z: Dd) -> Dd {
    if z.hi() >= 0.5 {
        (-ln_gamma(z)).exp()
    } else {
        // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
        let s = sin_pi(z);
        if s.hi() == 0.0 {
            return Dd::ZERO;
        }
        s * ln_gamma(Dd::ONE - z).exp() / Dd::pi()
    }
}

/// `ln |1/Gamma(z)|` and the sign of `1/Gamma(z)`; `None` at poles of `Gamma`.
pub fn ln_abs_rgamma(z: Dd) -> Option<(Dd, f64)> {
    if z.hi() >= 0.5 {
        Some((-ln_gamma(z), 1.0))
    } else {
        let s = sin_pi(z);
        if s.hi() == 0.0 {
            return None;
        }
        let sign = s.hi().signum();
        Some((s.abs().ln() + ln_gamma(Dd::ONE - z) - Dd::pi().ln(), sign))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Dd, b: &str) -> f64 {
        let b = Dd::from_decimal(b).unwrap();
        ((a - b) / b).abs().hi()
    }

    #[test]
    fn gamma_values() {
        // Gamma(1/2) = sqrt(pi)
        let v = rgamma(Dd::from(0.5));
        assert!(rel(v, "0.56418958354775628694807945156077258584405062932900") < 1e-30);
        // 1/Gamma at the doubles nearest 4.7 and -2.3
        assert!(rel(rgamma(Dd::from(4.7)), "0.064802885563426098546956971260057454082154464060619") < 1e-30);
        assert!(rel(rgamma(Dd::from(-2.3)), "-0.69103371592830929375419438471164853053607626707499") < 1e-29);
        assert!(rgamma(Dd::from(-3.0)).hi() == 0.0);
        // ln Gamma(100)
        assert!(rel(ln_gamma(Dd::from(100.0)), "359.13420536957539877604401046028690961262171808563") < 1e-30);
    }
}
