//! Independent high-precision evaluation of `F'_nu - delta F_nu / x` and a
//! pure-bisection zero finder built on it.
//!
//! Nothing here calls into `specfun`. Two evaluators:
//! - Hankel's expansion summed in double-double up to its smallest term, for
//!   `x > 40 + nu` when that term is below `1e-33` and no term exceeds `1/2`;
//! - otherwise the ascending series, summed exactly in big-integer fixed point
//!   (so cancellation costs bits of working precision, not accuracy) and scaled
//!   by a double-double prefactor. `Y` comes from the reflection formula, or from
//!   the logarithmic series when the order is an integer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::phase;
use crate::scalar::Real;
use crate::ZeroKind;

use super::ddgamma::{ln_abs_rgamma, sin_pi};

type Dd = DoubleDouble;

/// Double-double unit roundoff with a safety factor.
const DD_EPS: f64 = 1e-31;
/// The ascending series is used for `x <= SERIES_LIMIT + nu`, and beyond it
/// whenever Hankel's expansion cannot reach double-double accuracy.
pub const SERIES_LIMIT: f64 = 40.0;
/// Largest accepted Hankel truncation error, relative to the amplitude.
const HANKEL_TOL: f64 = 1e-33;

/// A value with an absolute error bound.
#[derive(Clone, Copy, Debug)]
pub struct OracleValue {
    /// `F'_nu(x) - delta F_nu(x) / x`, which has the sign of the target.
    pub value: Dd,
    pub err: f64,
}

impl OracleValue {
    /// Sign if it is resolved by the error bound.
    pub fn sign(&self) -> Option<f64> {
        let v = self.value.hi();
        if !v.is_finite() || v.abs() <= self.err {
            None
        } else {
            Some(v.signum())
        }
    }
}

fn rational(x: Dd) -> BigRational {
    x.to_rational()
}

fn rat_f64(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite")
}

/// `sum_m (-x^2/4)^m / (m! (c)_m)` in fixed point with `bits` fractional bits,
/// optionally with the weighted sum using weights `H_m + H_{n+m}`.
struct RawSeries {
    sum: BigInt,
    weighted: Option<BigInt>,
    bits: u64,
    /// Bound on the absolute error of `sum` and `weighted`, in real units.
    abs_err: f64,
}

fn fixed_to_rational(v: &BigInt, bits: u64) -> BigRational {
    BigRational::new(v.clone(), BigInt::one() << bits)
}

fn fixed_to_dd(v: &BigInt, bits: u64) -> Dd {
    Dd::from_rational_exact(&fixed_to_rational(v, bits))
}

fn series_fixed(c: &BigRational, x: &BigRational, harmonic: Option<u64>, bits: u64) -> RawSeries {
    let one = BigInt::one() << bits;
    let (xn, xd) = (x.numer().clone(), x.denom().clone());
    let (cn, cd) = (c.numer().clone(), c.denom().clone());
    let num_base = -(&xn * &xn) * &cd;
    let den_base = BigInt::from(4) * &xd * &xd;
    let mut t = one.clone();
    let mut sum = t.clone();
    let mut h = harmonic.map(|n| (1..=n).fold(BigInt::zero(), |acc, i| acc + &one / BigInt::from(i)));
    let mut wsum = h.as_ref().map(|h0| (&t * h0) >> bits);
    let xf = x.to_f64().unwrap_or(f64::INFINITY);
    let cf = c.to_f64().unwrap_or(0.0);
    let quarter_x2 = 0.25 * xf * xf;
    let mut max_bits = t.bits();
    let mut m: u64 = 0;
    loop {
        m += 1;
        let pochhammer = &cn + BigInt::from(m - 1) * &cd;
        let den = &den_base * BigInt::from(m) * &pochhammer;
        t = (&t * &num_base) / den;
        sum += &t;
        max_bits = max_bits.max(t.bits());
        if let (Some(hv), Some(n)) = (h.as_mut(), harmonic) {
            *hv += &one / BigInt::from(m) + &one / BigInt::from(n + m);
        }
        if let (Some(ws), Some(hv)) = (wsum.as_mut(), h.as_ref()) {
            *ws += (&t * hv) >> bits;
        }
        let mf = m as f64;
        let shrinking = mf * (cf + mf - 1.0).abs() > 2.0 * quarter_x2;
        if (t.is_zero() && shrinking) || m > 100_000 {
            break;
        }
    }
    // A unit truncated at step j is carried into step k multiplied by t_k / t_j,
    // which is at most the largest term (t_0 = 1).
    let terms = m as f64 + 2.0;
    let weight = 2.0 + terms.ln() + harmonic.map_or(0.0, |n| (n as f64 + 1.0).ln());
    let growth = max_bits.saturating_sub(bits) as i32;
    let abs_err = terms * weight * 2f64.powi(growth - bits.min(1000) as i32);
    RawSeries {
        sum,
        weighted: wsum,
        bits,
        abs_err,
    }
}

fn initial_bits(x: &BigRational) -> u64 {
    let xf = x.to_f64().unwrap_or(0.0);
    160 + (xf * std::f64::consts::LOG2_E).ceil().max(0.0) as u64
}

/// Runs `step` with increasing working precision until the truncation error
/// it reports is below `1e-33` of the magnitude it supplies.
fn adaptive<T>(x: &BigRational, mut step: impl FnMut(u64) -> (T, f64, f64)) -> T {
    let mut bits = initial_bits(x);
    loop {
        let (out, err, magnitude) = step(bits);
        if err <= 1e-33 * magnitude || bits > 8000 {
            return out;
        }
        let short = (err / (1e-33 * magnitude)).log2();
        bits += if short.is_finite() { short.ceil() as u64 + 16 } else { 256 };
    }
}

/// `J_alpha(x)` for rational `alpha` (any sign), via the ascending series.
fn bessel_j_series(alpha: &BigRational, x: &BigRational, xdd: Dd) -> (Dd, f64) {
    let c = alpha + BigRational::one();
    let alpha_dd = Dd::from_rational_exact(alpha);
    let pref = if alpha.is_zero() {
        Dd::ONE
    } else {
        match ln_abs_rgamma(alpha_dd + Dd::ONE) {
            None => return (Dd::ZERO, 0.0),
            Some((lr, sign)) => (alpha_dd * (xdd * Dd::from(0.5)).ln() + lr).exp() * Dd::from(sign),
        }
    };
    // the prefactor's error grows with the size of its logarithm
    let log_size = (alpha_dd.hi() * (0.5 * xdd.hi()).ln()).abs() + 50.0;
    // below the turning point J has no zeros; above it, measure against the envelope
    let envelope = if xdd.hi() > alpha_dd.hi().abs() {
        0.1 * (2.0 / (std::f64::consts::PI * xdd.hi())).sqrt()
    } else {
        0.0
    };
    adaptive(x, |bits| {
        let raw = series_fixed(&c, x, None, bits);
        let v = pref * fixed_to_dd(&raw.sum, raw.bits);
        let series_err = pref.hi().abs() * raw.abs_err;
        let err = series_err + v.hi().abs() * DD_EPS * log_size;
        ((v, err), series_err, v.hi().abs().max(envelope))
    })
}

/// `Y_n(x)` and its error for integer `n >= 0`:
///
/// `pi Y_n = 2 (ln(x/2) + gamma) J_n - (x/2)^{-n} sum_{k<n} (n-k-1)!/k! (x^2/4)^k
///          - (x/2)^n / n! sum_k (H_k + H_{n+k}) (-x^2/4)^k / (k! (n+1)_k)`.
///
/// The two rational sums cancel heavily for `x > n`, so they are combined
/// exactly before rounding.
fn bessel_y_integer(n: u64, x: &BigRational, xdd: Dd) -> (Dd, f64) {
    let c = BigRational::from_integer(BigInt::from(n + 1));
    let half_x = x / BigRational::from_integer(BigInt::from(2));
    let q = &half_x * &half_x;
    let mut fact = BigInt::one();
    for i in 1..=n {
        fact *= BigInt::from(i);
    }
    let pref = num_traits::pow::pow(half_x.clone(), n as usize) / BigRational::from_integer(fact);
    let mut finite = BigRational::zero();
    if n > 0 {
        let mut t = BigRational::from_integer((1..n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
            / num_traits::pow::pow(half_x.clone(), n as usize);
        for k in 0..n {
            finite += &t;
            if k + 1 < n {
                t = t * &q / BigRational::from_integer(BigInt::from((k + 1) * (n - k - 1)));
            }
        }
    }
    let pref_dd = Dd::from_rational_exact(&pref);
    let pref_f = pref_dd.hi().abs();
    let log_factor = Dd::from(2.0) * ((xdd * Dd::from(0.5)).ln() + Dd::euler_gamma());
    let pi = Dd::pi();
    let envelope = 0.1 * (2.0 / (std::f64::consts::PI * xdd.hi())).sqrt();
    adaptive(x, |bits| {
        let raw = series_fixed(&c, x, Some(n), bits);
        let jn = pref_dd * fixed_to_dd(&raw.sum, raw.bits);
        let weighted = fixed_to_rational(raw.weighted.as_ref().expect("weighted sum requested"), raw.bits);
        let combined = Dd::from_rational_exact(&(&finite + &pref * weighted));
        let y = (log_factor * jn - combined) / pi;
        let lf = log_factor.hi().abs();
        let series_err = pref_f * raw.abs_err * (1.0 + lf) / std::f64::consts::PI;
        let err = series_err + DD_EPS * 8.0 * (lf * jn.hi().abs() + combined.hi().abs()) / std::f64::consts::PI;
        ((y, err), series_err, y.hi().abs().max(envelope))
    })
}

/// `(F_nu, F_{nu+1})` with errors by the ascending series.
fn pair_series(kind: ZeroKind, nu: f64, x: Dd) -> ((Dd, f64), (Dd, f64)) {
    let xr = rational(x);
    let nur = rat_f64(nu);
    let nu1 = &nur + BigRational::one();
    match kind {
        ZeroKind::AZero => (bessel_j_series(&nur, &xr, x), bessel_j_series(&nu1, &xr, x)),
        ZeroKind::BZero => {
            if nu.fract() == 0.0 {
                let n = nu as u64;
                (bessel_y_integer(n, &xr, x), bessel_y_integer(n + 1, &xr, x))
            } else {
                let (jn, ejn) = bessel_j_series(&nur, &xr, x);
                let (jn1, ejn1) = bessel_j_series(&nu1, &xr, x);
                let (jm, ejm) = bessel_j_series(&-nur.clone(), &xr, x);
                let (jm1, ejm1) = bessel_j_series(&-nu1.clone(), &xr, x);
                let nud = Dd::from(nu);
                let s = sin_pi(nud);
                let c = sin_pi(nud + Dd::from(0.5));
                let y0 = (jn * c - jm) / s;
                let y1 = (jn1 * c + jm1) / s;
                let inv_s = 1.0 / s.hi().abs();
                let e0 = (ejn + ejm + DD_EPS * (jn.hi().abs() + jm.hi().abs())) * inv_s;
                let e1 = (ejn1 + ejm1 + DD_EPS * (jn1.hi().abs() + jm1.hi().abs())) * inv_s;
                ((y0, e0), (y1, e1))
            }
        }
    }
}

/// Hankel form of the target, or `None` if not accurate enough.
fn hankel_target(kind: ZeroKind, nu: f64, delta: f64, x: Dd) -> Option<OracleValue> {
    let mu = Dd::from(nu) * Dd::from(nu) * Dd::from(4.0);
    let inv8x = Dd::ONE / (x * Dd::from(8.0));
    let mut a_prev = Dd::ONE;
    let (mut p, mut q, mut r, mut s) = (Dd::ONE, Dd::ZERO, Dd::ONE, Dd::ZERO);
    let mut last = f64::INFINITY;
    let mut trunc = None;
    for k in 1..2000usize {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let a = a_prev * (mu - Dd::from(odd * odd)) * inv8x / Dd::from(kf);
        let b = a_prev * (mu + Dd::from(4.0 * kf * kf - 1.0)) * inv8x / Dd::from(kf);
        let size = a.hi().abs().max(b.hi().abs());
        if size > 0.5 {
            return None;
        }
        if size >= last && kf > nu {
            trunc = Some(last);
            break;
        }
        let sign = if (k / 2) % 2 == 0 { Dd::ONE } else { -Dd::ONE };
        if k % 2 == 0 {
            p += sign * a;
            r += sign * b;
        } else {
            q += sign * a;
            s += sign * b;
        }
        if size == 0.0 || size < 1e-40 {
            trunc = Some(size);
            break;
        }
        last = size;
        a_prev = a;
    }
    let trunc = trunc?;
    if trunc > HANKEL_TOL {
        return None;
    }
    let d = Dd::from(delta);
    let quarter = Dd::from(nu * 0.5 + 0.25);
    // chi = x - (nu/2 + 1/4) pi
    let chi = x - quarter * Dd::pi();
    let (sn, cs) = chi.sin_cos();
    let rr = r - d * q / x;
    let ss = s + d * p / x;
    let core = match kind {
        ZeroKind::BZero => rr * cs - ss * sn,
        ZeroKind::AZero => -(ss * cs) - rr * sn,
    };
    let amp = (Dd::from(2.0) / (Dd::pi() * x)).sqrt();
    let value = core * amp;
    let scale = amp.hi() * (1.0 + delta.abs() / x.hi());
    let err = scale * (2.0 * trunc + DD_EPS * (8.0 + x.hi().abs()));
    Some(OracleValue { value, err })
}

/// `F'_nu(x) - delta F_nu(x) / x` with `F = J` (`AZero`) or `Y` (`BZero`).
pub fn oracle_eval(kind: ZeroKind, nu: f64, delta: f64, x: Dd) -> Result<OracleValue> {
    if !(nu >= 0.0 && nu.is_finite() && delta.is_finite() && x.hi() > 0.0 && x.hi().is_finite()) {
        return Err(Error::Domain(format!(
            "oracle needs nu >= 0, finite delta and x > 0; got nu = {nu}, delta = {delta}, x = {}",
            x.hi()
        )));
    }
    if x.hi() > SERIES_LIMIT + nu {
        if let Some(v) = hankel_target(kind, nu, delta, x) {
            return Ok(v);
        }
    }
    let ((f0, e0), (f1, e1)) = pair_series(kind, nu, x);
    // F' - delta F / x = ((nu - delta) F_nu - x F_{nu+1}) / x
    let nd = Dd::from(nu) - Dd::from(delta);
    let value = (nd * f0 - x * f1) / x;
    let xh = x.hi();
    let err = ((nd.hi().abs() * e0 + xh * e1)
        + DD_EPS * 4.0 * (nd.hi().abs() * f0.hi().abs() + xh * f1.hi().abs()))
        / xh;
    Ok(OracleValue { value, err })
}

/// A zero located by bisection: `value` with half-width `half_width`.
#[derive(Clone, Copy, Debug)]
pub struct OracleZero {
    pub value: Dd,
    pub half_width: f64,
}

/// Bisection of a sign-change interval in double-double.
pub fn bisect(kind: ZeroKind, nu: f64, delta: f64, lo: Dd, hi: Dd) -> Result<OracleZero> {
    let mut lo = lo;
    let mut hi = hi;
    let s_lo = oracle_eval(kind, nu, delta, lo)?
        .sign()
        .ok_or_else(|| Error::OracleUnavailable("unresolved sign at lower end".into()))?;
    let s_hi = oracle_eval(kind, nu, delta, hi)?
        .sign()
        .ok_or_else(|| Error::OracleUnavailable("unresolved sign at upper end".into()))?;
    if s_lo == s_hi {
        return Err(Error::OracleUnavailable("no sign change in oracle bracket".into()));
    }
    for _ in 0..200 {
        let mid = (lo + hi) * Dd::from(0.5);
        if (hi - lo).hi() <= 2.0 * DD_EPS * mid.hi().abs() {
            break;
        }
        let v = oracle_eval(kind, nu, delta, mid)?;
        match v.sign() {
            None => {
                // resolution limit reached: the zero lies where the value is within its error
                lo = mid;
                hi = mid;
                break;
            }
            Some(s) if s == s_lo => lo = mid,
            Some(_) => hi = mid,
        }
    }
    let value = (lo + hi) * Dd::from(0.5);
    let half_width = ((hi - lo) * Dd::from(0.5)).hi().abs().max(DD_EPS * value.hi().abs());
    Ok(OracleZero { value, half_width })
}

/// Scans `(0, X]` for sign changes with its own grid and evaluator, then
/// bisects. Indices are established purely by counting.
#[derive(Clone, Debug)]
pub struct OracleSolver {
    kind: ZeroKind,
    nu: f64,
    delta: f64,
    grid: Vec<f64>,
    scanned_to: f64,
    last: Option<(f64, f64)>,
    changes: Vec<(f64, f64)>,
    phase_shift: i64,
}

const GRID_START: f64 = 1e-12;
const GRID_RATIO: f64 = 1.1;
const GRID_STEP: f64 = std::f64::consts::PI / 16.0;

impl OracleSolver {
    pub fn new(kind: ZeroKind, nu: f64, delta: f64) -> Result<Self> {
        let mut s = Self {
            kind,
            nu,
            delta,
            grid: Vec::new(),
            scanned_to: 0.0,
            last: None,
            changes: Vec::new(),
            phase_shift: 0,
        };
        let k = phase::large_k_threshold(nu, delta);
        let x_k = phase::h_inverse(nu, phase::phase_separator(kind, k))?;
        s.extend_to(x_k)?;
        s.phase_shift = k as i64 - s.changes.iter().filter(|c| c.1 <= x_k).count() as i64;
        Ok(s)
    }

    /// Phase index minus positive index.
    pub fn phase_shift(&self) -> i64 {
        self.phase_shift
    }

    fn next_grid_point(&self, x: f64) -> f64 {
        if x < 1.0 {
            (x * GRID_RATIO).min(1.0)
        } else {
            x + GRID_STEP
        }
    }

    fn extend_to(&mut self, x_end: f64) -> Result<()> {
        let mut x = if self.scanned_to == 0.0 {
            GRID_START
        } else {
            self.next_grid_point(self.scanned_to)
        };
        while self.scanned_to < x_end {
            let v = oracle_eval(self.kind, self.nu, self.delta, Dd::from(x))?;
            if let Some(s) = v.sign() {
                if let Some((xl, sl)) = self.last {
                    if sl != s {
                        self.changes.push((xl, x));
                    }
                }
                self.last = Some((x, s));
            }
            self.grid.push(x);
            self.scanned_to = x;
            x = self.next_grid_point(x);
        }
        Ok(())
    }

    /// Number of sign changes found in `(0, x]` (extending the scan if needed).
    pub fn count_below(&mut self, x: f64) -> Result<usize> {
        self.extend_to(x)?;
        Ok(self.changes.iter().filter(|c| c.1 <= x).count())
    }

    /// Interval holding the zero with the given positive index (1-based).
    pub fn bracket(&mut self, index: usize) -> Result<(f64, f64)> {
        if index == 0 {
            return Err(Error::Domain("zero index starts at 1".into()));
        }
        let mut guard = 0;
        while self.changes.len() < index {
            let phase = (index as i64 + self.phase_shift).max(1) as usize + guard;
            let target = phase::h_inverse(self.nu, phase::phase_separator(self.kind, phase))?;
            let next = target.max(self.scanned_to + 1.0);
            self.extend_to(next)?;
            guard += 1;
            if guard > 10_000 {
                return Err(Error::OracleUnavailable("scan failed to reach the requested zero".into()));
            }
        }
        Ok(self.changes[index - 1])
    }

    /// Zero with the given positive index.
    pub fn zero(&mut self, index: usize) -> Result<OracleZero> {
        let (lo, hi) = self.bracket(index)?;
        let z = bisect(self.kind, self.nu, self.delta, Dd::from(lo), Dd::from(hi))?;
        if z.half_width > 1e-20 * z.value.hi().abs() {
            return Err(Error::OracleUnavailable(format!(
                "oracle resolved the zero only to {:e}",
                z.half_width
            )));
        }
        Ok(z)
    }

    /// Zero whose phase index is `k` (the index used by the expansions).
    pub fn zero_at_phase(&mut self, k: usize) -> Result<OracleZero> {
        let index = k as i64 - self.phase_shift;
        if index < 1 {
            return Err(Error::Domain(format!(
                "phase index {k} has no positive zero (shift {})",
                self.phase_shift
            )));
        }
        self.zero(index as usize)
    }
}
