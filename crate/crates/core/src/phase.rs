//! The phase function `g`, the oscillation count `h_nu(x) = x g(nu/x)`, its
//! inverse, and zero brackets built from them.
//!
//! Past the turning point `x = nu`, `h_nu(x)` counts the half-periods of the
//! Bessel oscillation: the `k`-th zero of `y'_{nu,delta}` sits near `h = k - 1/4`
//! and the `k`-th zero of `j'_{nu,delta}` near `h = k - 3/4`.

use std::f64::consts::{FRAC_1_PI, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun;
use crate::ZeroKind;

/// `sin t - t cos t` without cancellation for small `t`.
fn sin_minus_t_cos(t: f64) -> f64 {
    if t < 0.5 {
        // sum_{n>=1} (-1)^{n+1} 2n t^{2n+1} / (2n+1)!
        let t2 = t * t;
        let mut term = t * t2 / 3.0;
        let mut sum = term;
        let mut n = 1.0f64;
        loop {
            // ratio of consecutive terms: -t^2 (n+1) / (n (2n+2)(2n+3))
            term *= -t2 * (n + 1.0) / (n * (2.0 * n + 2.0) * (2.0 * n + 3.0));
            sum += term;
            n += 1.0;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        let (s, c) = t.sin_cos();
        s - t * c
    }
}

/// `g(x) = (sqrt(1 - x^2) - x arccos x) / pi` on `[0, 1]`.
pub fn g(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("g needs 0 <= x <= 1, got {x}")));
    }
    // x = cos t
    let t = ((1.0 - x) * (1.0 + x)).sqrt().atan2(x);
    Ok(sin_minus_t_cos(t) * FRAC_1_PI)
}

/// Angle `t` in `[0, pi/2]` with `cos t = nu/x`.
fn turning_angle(nu: f64, x: f64) -> f64 {
    ((x - nu) * (x + nu)).sqrt().atan2(nu)
}

/// `h_nu(x) = x g(nu/x) = (sqrt(x^2 - nu^2) - nu arccos(nu/x)) / pi`.
pub fn h(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::Domain(format!("h needs nu >= 0, got {nu}")));
    }
    if !(x >= nu) || !x.is_finite() {
        return Err(Error::Domain(format!("h needs x >= nu, got nu = {nu}, x = {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(h_unchecked(nu, x))
}

fn h_unchecked(nu: f64, x: f64) -> f64 {
    x * sin_minus_t_cos(turning_angle(nu, x)) * FRAC_1_PI
}

/// `dh_nu/dx = sqrt(1 - nu^2/x^2) / pi`.
pub fn h_derivative(nu: f64, x: f64) -> f64 {
    turning_angle(nu, x).sin() * FRAC_1_PI
}

/// Solves `h_nu(x) = t` for `x >= nu` by safeguarded Newton iteration.
pub fn h_inverse(nu: f64, t: f64) -> Result<f64> {
    if !(nu >= 0.0 && nu.is_finite()) || !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "h_inverse needs nu >= 0 and t >= 0, got nu = {nu}, t = {t}"
        )));
    }
    if t == 0.0 {
        return Ok(nu);
    }
    let mut lo = nu;
    let mut hi = nu + PI * (t + 1.0) + PI * nu;
    // near the turning point h ~ (2 sqrt 2 / (3 pi)) nu^{-1/2} (x - nu)^{3/2};
    // far from it h ~ x/pi - nu/2
    let near = nu + (3.0 * PI * t * nu.sqrt() / (2.0 * 2f64.sqrt())).powf(2.0 / 3.0);
    let far = PI * t + PI * nu / 2.0;
    let mut x = [near, far]
        .into_iter()
        .filter(|v| *v > lo && *v < hi)
        .min_by(|a, b| {
            let da = (h_unchecked(nu, *a) - t).abs();
            let db = (h_unchecked(nu, *b) - t).abs();
            da.total_cmp(&db)
        })
        .unwrap_or(0.5 * (lo + hi));
    for _ in 0..200 {
        let f = h_unchecked(nu, x) - t;
        if f == 0.0 {
            return Ok(x);
        }
        if f > 0.0 {
            hi = hi.min(x);
        } else {
            lo = lo.max(x);
        }
        let d = h_derivative(nu, x);
        let mut next = x - f / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x.abs() || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Where a bracket came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BracketSource {
    /// Large-order construction, left end inside the Airy transition region.
    LargeNuAiry,
    /// Large-order construction, oscillatory region.
    LargeNuOsc,
    /// Small-order construction, oscillatory region.
    SmallNuOsc,
    /// Sign-change scan (moderate orders, small indices, or after a failed construction).
    Scan,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub kind: ZeroKind,
    /// Phase index of the bracketed zero (see [`bracket_for_zero`]).
    pub k: usize,
    pub source: BracketSource,
}

/// Order from which the large-order construction is used.
pub const LARGE_NU: f64 = 50.0;

/// Index from which the constructions are trusted: `max(10, ceil(nu), ceil(2|delta|))`.
pub fn large_k_threshold(nu: f64, delta: f64) -> usize {
    10usize
        .max(nu.ceil() as usize)
        .max((2.0 * delta.abs()).ceil() as usize)
}

/// Target `h`-interval for the phase-`k` zero.
///
/// Large orders: `(k - 1/2, k)` for `y'` zeros, `(k - 1, k - 1/2)` for `j'` zeros.
/// Small orders: `(k - 3/8, k + 1/8)` and `(k - 7/8, k - 3/8)`.
pub fn phase_window(kind: ZeroKind, nu: f64, k: usize) -> (f64, f64) {
    let kf = k as f64;
    match (kind, nu >= LARGE_NU) {
        (ZeroKind::BZero, true) => (kf - 0.5, kf),
        (ZeroKind::AZero, true) => (kf - 1.0, kf - 0.5),
        (ZeroKind::BZero, false) => (kf - 0.375, kf + 0.125),
        (ZeroKind::AZero, false) => (kf - 0.875, kf - 0.375),
    }
}

/// `h` value separating the phase-`k` zero from the phase-`k+1` zero.
pub fn phase_separator(kind: ZeroKind, k: usize) -> f64 {
    let kf = k as f64;
    match kind {
        ZeroKind::BZero => kf + 0.25,
        ZeroKind::AZero => kf - 0.25,
    }
}

fn sign_change(kind: ZeroKind, nu: f64, delta: f64, lo: f64, hi: f64) -> Result<bool> {
    let a = specfun::ultra_prime(kind, nu, delta, lo)?;
    let b = specfun::ultra_prime(kind, nu, delta, hi)?;
    Ok(a * b < 0.0)
}

/// Bracket for the zero whose phase `h_nu` is near `k - 1/4` (`y'`) or
/// `k - 3/4` (`j'`).
///
/// The phase index equals the positive-zero index whenever no extra zero sits
/// below the oscillatory region; `zeros` reconciles the two by counting.
/// For `k` below [`large_k_threshold`] or when the constructed interval shows
/// no sign change, a scan with step `pi/16` around the phase estimate is
/// tried, widening twice before giving up.
pub fn bracket_for_zero(kind: ZeroKind, nu: f64, delta: f64, k: usize) -> Result<Bracket> {
    if k == 0 {
        return Err(Error::Domain("zero index starts at 1".into()));
    }
    let (t_lo, t_hi) = phase_window(kind, nu, k);
    if k >= large_k_threshold(nu, delta) && t_lo > 0.0 {
        let lo = h_inverse(nu, t_lo)?;
        let hi = h_inverse(nu, t_hi)?;
        if sign_change(kind, nu, delta, lo, hi)? {
            let source = if nu >= LARGE_NU {
                if lo < (1.0 + specfun::REGIME_C) * nu {
                    BracketSource::LargeNuAiry
                } else {
                    BracketSource::LargeNuOsc
                }
            } else {
                BracketSource::SmallNuOsc
            };
            return Ok(Bracket {
                lo,
                hi,
                kind,
                k,
                source,
            });
        }
    }
    scan_bracket(kind, nu, delta, k)
}

fn scan_bracket(kind: ZeroKind, nu: f64, delta: f64, k: usize) -> Result<Bracket> {
    let target = match kind {
        ZeroKind::BZero => k as f64 - 0.25,
        ZeroKind::AZero => k as f64 - 0.75,
    };
    let centre = h_inverse(nu, target.max(0.0))?;
    let step = PI / 16.0;
    let mut half_width = PI / 2.0;
    for _ in 0..3 {
        let start = (centre - half_width).max(1e-8);
        let end = centre + half_width;
        // sign changes nearest to the centre win
        let mut best: Option<(f64, f64)> = None;
        let mut x0 = start;
        let mut f0 = specfun::ultra_prime(kind, nu, delta, x0).ok();
        while x0 < end {
            let x1 = (x0 + step).min(end);
            let f1 = specfun::ultra_prime(kind, nu, delta, x1).ok();
            if let (Some(a), Some(b)) = (f0, f1) {
                if a * b < 0.0 {
                    let mid = 0.5 * (x0 + x1);
                    let better = match best {
                        None => true,
                        Some((l, r)) => (mid - centre).abs() < (0.5 * (l + r) - centre).abs(),
                    };
                    if better {
                        best = Some((x0, x1));
                    }
                }
            }
            x0 = x1;
            f0 = f1;
        }
        if let Some((lo, hi)) = best {
            return Ok(Bracket {
                lo,
                hi,
                kind,
                k,
                source: BracketSource::Scan,
            });
        }
        half_width *= 2.0;
    }
    Err(Error::BracketFailure {
        kind,
        nu,
        delta,
        k,
    })
}
