//! Scalar abstraction shared by the generic numeric kernels.
//!
//! The hot evaluation paths run in `f64`; the verification oracle and the
//! convergence studies instantiate the same kernels with [`DoubleDouble`]
//! (about 31 significant digits). Exact rational work lives in `mcmahon`
//! and only meets this trait through [`Real::from_ratio`].
//!
//! [`DoubleDouble`]: crate::dd::DoubleDouble

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FloatConst, FromPrimitive, Num, NumAssignOps, ToPrimitive};

pub trait Real:
    Copy
    + Send
    + Sync
    + Debug
    + Display
    + PartialOrd
    + Num
    + NumAssignOps
    + Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + FloatConst
{
    /// Unit roundoff of the representation.
    fn epsilon() -> Self;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn powi(self, n: i32) -> Self;
    fn is_finite(self) -> bool;
    fn floor(self) -> Self;

    fn sin(self) -> Self {
        self.sin_cos().0
    }

    fn cos(self) -> Self {
        self.sin_cos().1
    }

    fn powf(self, e: Self) -> Self {
        (e * self.ln()).exp()
    }

    fn from_f64_lossless(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Nearest representable value to `num/den`.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self;

    fn from_rational(r: &BigRational) -> Self {
        Self::from_ratio(r.numer(), r.denom())
    }

    fn from_usize(n: usize) -> Self {
        Self::from_f64_lossless(n as f64)
    }

    fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    fn signum_f64(self) -> f64 {
        let v = self.to_f64_lossy();
        if v > 0.0 {
            1.0
        } else if v < 0.0 {
            -1.0
        } else {
            0.0
        }
    }
}

macro_rules! impl_real_for_primitive {
    ($t:ty) => {
        impl Real for $t {
            fn epsilon() -> Self {
                <$t>::EPSILON
            }
            fn abs(self) -> Self {
                <$t>::abs(self)
            }
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }
            fn exp(self) -> Self {
                <$t>::exp(self)
            }
            fn ln(self) -> Self {
                <$t>::ln(self)
            }
            fn sin_cos(self) -> (Self, Self) {
                <$t>::sin_cos(self)
            }
            fn powi(self, n: i32) -> Self {
                <$t>::powi(self, n)
            }
            fn is_finite(self) -> bool {
                <$t>::is_finite(self)
            }
            fn floor(self) -> Self {
                <$t>::floor(self)
            }
            fn powf(self, e: Self) -> Self {
                <$t>::powf(self, e)
            }
            fn from_f64_lossless(x: f64) -> Self {
                x as $t
            }
            fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
                BigRational::new(num.clone(), den.clone())
                    .to_f64()
                    .unwrap_or(f64::NAN) as $t
            }
        }
    };
}

impl_real_for_primitive!(f32);
impl_real_for_primitive!(f64);

#[cfg(test)]
mod tests {
    use super::*;

    fn horner<T: Real>(coeffs: &[f64], x: T) -> T {
        coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * x + T::from_f64_lossless(c))
    }

    #[test]
    fn generic_code_runs_on_both_primitive_widths() {
        let c = [1.0, -2.0, 0.5];
        assert_eq!(horner(&c, 2.0f64), 1.0 - 4.0 + 2.0);
        assert_eq!(horner(&c, 2.0f32), 1.0 - 4.0 + 2.0);
    }

    #[test]
    fn ratio_conversion_rounds() {
        let v = f64::from_ratio(&BigInt::from(1), &BigInt::from(3));
        assert_eq!(v, 1.0 / 3.0);
    }
}
