//! Double-double arithmetic.
//!
//! A value is the unevaluated sum `hi + lo` of two `f64` with
//! `|lo| <= ulp(hi)/2`, giving roughly 106 bits of significand. Basic
//! operations follow the classical error-free transformations (Knuth's
//! two-sum, Dekker's split product); the elementary functions reduce the
//! argument and sum a Taylor series in double-double.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{
    Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FloatConst, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::scalar::Real;

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
const SPLIT_THRESHOLD: f64 = 6.696_928_794_914_171e299; // 2^996

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    if a.abs() > SPLIT_THRESHOLD {
        let a = a * 3.725_290_298_461_914e-9; // 2^-28
        let t = SPLITTER * a;
        let hi = t - (t - a);
        let lo = a - hi;
        (hi * 268_435_456.0, lo * 268_435_456.0)
    } else {
        let t = SPLITTER * a;
        let hi = t - (t - a);
        (hi, a - hi)
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    if !p.is_finite() {
        return (p, 0.0);
    }
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

/// Exact rational value of a finite `f64`.
pub(crate) fn rational_of_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

/// Parses a plain decimal literal (`-1.25e-3`) into an exact rational.
pub(crate) fn parse_decimal_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut num: BigInt = digits.parse().ok()?;
    if neg {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494459";
const LN2_DIGITS: &str = "0.693147180559945309417232121458176568075500134360255254120680009";
const EULER_GAMMA_DIGITS: &str =
    "0.577215664901532860606512090082402431042159335939923598805767234884867726777664670936947";

struct Constants {
    pi: DoubleDouble,
    pi_parts: [f64; 3],
    ln2: DoubleDouble,
    euler_gamma: DoubleDouble,
}

static CONSTANTS: Lazy<Constants> = Lazy::new(|| {
    let pi = parse_decimal_rational(PI_DIGITS).unwrap();
    let p1 = pi.to_f64().unwrap();
    let r1 = &pi - rational_of_f64(p1);
    let p2 = r1.to_f64().unwrap();
    let r2 = &r1 - rational_of_f64(p2);
    let p3 = r2.to_f64().unwrap();
    Constants {
        pi: DoubleDouble::from_rational_exact(&pi),
        pi_parts: [p1, p2, p3],
        ln2: DoubleDouble::from_rational_exact(&parse_decimal_rational(LN2_DIGITS).unwrap()),
        euler_gamma: DoubleDouble::from_rational_exact(
            &parse_decimal_rational(EULER_GAMMA_DIGITS).unwrap(),
        ),
    }
});

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    /// 2^-104; a conservative unit roundoff.
    pub const EPSILON: f64 = 4.930_380_657_631_324e-32;

    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Builds from two components, renormalizing.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn pi() -> Self {
        CONSTANTS.pi
    }

    pub fn ln2() -> Self {
        CONSTANTS.ln2
    }

    pub fn euler_gamma() -> Self {
        CONSTANTS.euler_gamma
    }

    /// Correctly rounded (to within the last `lo` bit) image of an exact rational.
    pub fn from_rational_exact(r: &BigRational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() || hi == 0.0 {
            return Self::from_f64(hi);
        }
        let rest = r - rational_of_f64(hi);
        let lo = rest.to_f64().unwrap_or(0.0);
        Self::new(hi, lo)
    }

    /// Parses a decimal literal exactly and rounds once.
    pub fn from_decimal(s: &str) -> Option<Self> {
        parse_decimal_rational(s).map(|r| Self::from_rational_exact(&r))
    }

    /// Exact rational value of `hi + lo`.
    pub fn to_rational(self) -> BigRational {
        rational_of_f64(self.hi) + rational_of_f64(self.lo)
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let e = e + self.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Self { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, t) = two_sum(self.hi, -p);
        let t = t - e + self.lo;
        let q2 = (s + t) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }

    /// Multiplication by an exact power of two.
    pub fn ldexp(self, k: i32) -> Self {
        let scale = |x: f64| {
            let mut x = x;
            let mut k = k;
            while k > 1000 {
                x *= 2f64.powi(1000);
                k -= 1000;
            }
            while k < -1000 {
                x *= 2f64.powi(-1000);
                k += 1000;
            }
            x * 2f64.powi(k)
        };
        Self {
            hi: scale(self.hi),
            lo: scale(self.lo),
        }
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn is_nan(self) -> bool {
        self.hi.is_nan()
    }

    pub fn round(self) -> Self {
        let hi = self.hi.round();
        if hi == self.hi {
            // hi already integral: round the tail
            let lo = self.lo.round();
            Self::new(hi, lo)
        } else if (hi - self.hi).abs() == 0.5 {
            // tie in hi decided by the sign of lo
            if self.lo > 0.0 && hi < self.hi {
                Self::from_f64(hi + 1.0)
            } else if self.lo < 0.0 && hi > self.hi {
                Self::from_f64(hi - 1.0)
            } else {
                Self::from_f64(hi)
            }
        } else {
            Self::from_f64(hi)
        }
    }

    fn floor_impl(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            Self::new(hi, self.lo.floor())
        } else {
            Self::from_f64(hi)
        }
    }

    fn exp_impl(self) -> Self {
        if self.hi > 709.78 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Self::ZERO;
        }
        if self.hi == 0.0 {
            return Self::ONE;
        }
        let ln2 = Self::ln2();
        let k = (self.hi / ln2.hi).round();
        // |r| <= ln2/2 / 1024
        let r = (self - ln2.mul_f64(k)).ldexp(-10);
        // expm1(r) by Taylor
        let mut term = r;
        let mut s = r;
        let mut n = 2.0;
        while term.hi.abs() > 1e-36 * s.hi.abs().max(1e-300) {
            term = (term * r).div_f64(n);
            s += term;
            n += 1.0;
            if n > 30.0 {
                break;
            }
        }
        for _ in 0..10 {
            // (1+s)^2 - 1
            s = s.mul_f64(2.0) + s.sqr();
        }
        (s + Self::ONE).ldexp(k as i32)
    }

    fn ln_impl(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::from_f64(f64::NEG_INFINITY)
            } else {
                Self::from_f64(f64::NAN)
            };
        }
        if !self.hi.is_finite() {
            return self;
        }
        let mut x = Self::from_f64(self.hi.ln());
        for _ in 0..2 {
            x = x + self * (-x).exp_impl() - Self::ONE;
        }
        x
    }

    fn sin_cos_impl(self) -> (Self, Self) {
        if !self.hi.is_finite() {
            return (Self::from_f64(f64::NAN), Self::from_f64(f64::NAN));
        }
        let [p1, p2, p3] = CONSTANTS.pi_parts;
        let half = [p1 * 0.5, p2 * 0.5, p3 * 0.5];
        let j = (self.hi / half[0]).round();
        let (a, ae) = two_prod(j, half[0]);
        let (b, be) = two_prod(j, half[1]);
        let r = self - Self::new(a, ae) - Self::new(b, be) - Self::from_f64(j * half[2]);
        let r2 = r.sqr();
        let tiny = 1e-35;
        // sin
        let mut term = r;
        let mut sin = r;
        let mut n = 1.0;
        while term.hi.abs() > tiny {
            term = -(term * r2).div_f64((n + 1.0) * (n + 2.0));
            sin += term;
            n += 2.0;
        }
        let mut term = Self::ONE;
        let mut cos = Self::ONE;
        let mut n = 0.0;
        while term.hi.abs() > tiny {
            term = -(term * r2).div_f64((n + 1.0) * (n + 2.0));
            cos += term;
            n += 2.0;
        }
        match (j as i64).rem_euclid(4) {
            0 => (sin, cos),
            1 => (cos, -sin),
            2 => (-sin, -cos),
            _ => (-cos, sin),
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() {
            return Self::from_f64(q1);
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self { hi: q1, lo: q2 }.add_f64(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        let q = self / b;
        let q = if q.hi >= 0.0 {
            q.floor_impl()
        } else {
            -(-q).floor_impl()
        };
        self - q * b
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            #[inline]
            fn $m(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);
assign_op!(RemAssign, rem_assign, %);

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::ONE
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        if radix != 10 {
            return Err(format!("unsupported radix {radix}"));
        }
        Self::from_decimal(s).ok_or_else(|| format!("invalid decimal literal {s:?}"))
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        Some(Self::new(hi, lo))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Self::new(hi, lo))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(Self::from_f64(x))
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        let t = self.floor_impl();
        Some(t.hi as i64 + t.lo as i64)
    }
    fn to_u64(&self) -> Option<u64> {
        self.to_i64().and_then(|v| u64::try_from(v).ok())
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl FloatConst for DoubleDouble {
    fn E() -> Self {
        Self::ONE.exp_impl()
    }
    fn FRAC_1_PI() -> Self {
        Self::ONE / Self::pi()
    }
    fn FRAC_1_SQRT_2() -> Self {
        Self::from_f64(0.5).sqrt()
    }
    fn FRAC_2_PI() -> Self {
        Self::from_f64(2.0) / Self::pi()
    }
    fn FRAC_2_SQRT_PI() -> Self {
        Self::from_f64(2.0) / Self::pi().sqrt()
    }
    fn FRAC_PI_2() -> Self {
        Self::pi().ldexp(-1)
    }
    fn FRAC_PI_3() -> Self {
        Self::pi().div_f64(3.0)
    }
    fn FRAC_PI_4() -> Self {
        Self::pi().ldexp(-2)
    }
    fn FRAC_PI_6() -> Self {
        Self::pi().div_f64(6.0)
    }
    fn FRAC_PI_8() -> Self {
        Self::pi().ldexp(-3)
    }
    fn LN_10() -> Self {
        Self::from_f64(10.0).ln_impl()
    }
    fn LN_2() -> Self {
        Self::ln2()
    }
    fn LOG10_E() -> Self {
        Self::ONE / Self::LN_10()
    }
    fn LOG2_E() -> Self {
        Self::ONE / Self::ln2()
    }
    fn PI() -> Self {
        Self::pi()
    }
    fn SQRT_2() -> Self {
        Self::from_f64(2.0).sqrt()
    }
}

impl Real for DoubleDouble {
    fn epsilon() -> Self {
        Self::from_f64(Self::EPSILON)
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::ZERO
            } else {
                Self::from_f64(f64::NAN)
            };
        }
        let s = self.hi.sqrt();
        let (p, e) = two_prod(s, s);
        let r = self - Self { hi: p, lo: e };
        Self::new(s, r.hi / (2.0 * s))
    }
    fn exp(self) -> Self {
        self.exp_impl()
    }
    fn ln(self) -> Self {
        self.ln_impl()
    }
    fn sin_cos(self) -> (Self, Self) {
        self.sin_cos_impl()
    }
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        if n < 0 {
            Self::ONE / acc
        } else {
            acc
        }
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
    fn floor(self) -> Self {
        self.floor_impl()
    }
    fn from_f64_lossless(x: f64) -> Self {
        Self::from_f64(x)
    }
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        Self::from_rational_exact(&BigRational::new(num.clone(), den.clone()))
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    /// Prints 32 significant decimal digits (or the requested precision).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.hi.is_finite() {
            return write!(f, "{}", self.hi);
        }
        if self.hi == 0.0 {
            return write!(f, "0");
        }
        let digits = f.precision().unwrap_or(31) + 1;
        let r = self.to_rational();
        let neg = r.is_negative();
        let mut r = r.abs();
        let ten = BigRational::from_integer(BigInt::from(10));
        let mut exp10 = self.hi.abs().log10().floor() as i32;
        r /= num_traits::pow::Pow::pow(&ten, exp10);
        // fix up possible off-by-one in the estimate
        while r >= ten {
            r /= &ten;
            exp10 += 1;
        }
        while r < BigRational::one() {
            r *= &ten;
            exp10 -= 1;
        }
        let scaled = r * num_traits::pow::Pow::pow(&ten, (digits - 1) as i32);
        let mut int = scaled.round().to_integer().to_string();
        if int.len() > digits {
            int.truncate(digits);
            exp10 += 1;
        }
        let (first, rest) = int.split_at(1);
        write!(
            f,
            "{}{}.{}e{}",
            if neg { "-" } else { "" },
            first,
            rest,
            exp10
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(s: &str) -> DoubleDouble {
        DoubleDouble::from_decimal(s).unwrap()
    }

    fn rel(a: DoubleDouble, b: DoubleDouble) -> f64 {
        ((a - b) / b).abs().to_f64_lossy()
    }

    #[test]
    fn arithmetic_reaches_double_double_precision() {
        let third = DoubleDouble::ONE / DoubleDouble::from_f64(3.0);
        let back = third * DoubleDouble::from_f64(3.0);
        assert!((back - DoubleDouble::ONE).abs().hi() < 1e-31);
        let two = DoubleDouble::from_f64(2.0);
        let s = two.sqrt();
        assert!(rel(s * s, two) < 1e-31);
        assert!(rel(s, dd("1.41421356237309504880168872420969807856967187537694")) < 1e-31);
    }

    #[test]
    fn exp_and_ln_match_reference_digits() {
        let e = DoubleDouble::ONE.exp();
        assert!(rel(e, dd("2.71828182845904523536028747135266249775724709369995")) < 2e-31);
        let x = dd("-37.25").exp();
        // mpmath: exp(-37.25)
        assert!(rel(x, dd("6.6455441729150705396332801061857893575581681425549e-17")) < 4e-31);
        let l = DoubleDouble::from_f64(10.0).ln();
        assert!(rel(l, dd("2.30258509299404568401799145468436420760110148862877")) < 2e-31);
        let y = dd("123.456");
        assert!(rel(y.ln().exp(), y) < 2e-30);
    }

    #[test]
    fn sin_cos_after_argument_reduction() {
        // mpmath values at x = 500.125
        let x = dd("500.125");
        let (s, c) = x.sin_cos();
        assert!((s - dd("-0.57431576655440938300612189078288197979406733108773")).abs().hi() < 1e-29);
        assert!((c - dd("-0.81863386216734349348667050278563330599264384882627")).abs().hi() < 1e-29);
        let (s, c) = dd("0.1").sin_cos();
        assert!((s * s + c * c - DoubleDouble::ONE).abs().hi() < 1e-31);
    }

    #[test]
    fn display_prints_full_precision() {
        let p = DoubleDouble::pi();
        let text = format!("{p}");
        assert!(text.starts_with("3.14159265358979323846264338327"), "{text}");
    }

    #[test]
    fn rational_roundtrip_is_exact_for_two_components() {
        let v = DoubleDouble::new(1.0, 1e-20);
        let r = v.to_rational();
        assert_eq!(DoubleDouble::from_rational_exact(&r), v);
    }
}
