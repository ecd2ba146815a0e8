//! Bessel and Airy functions and the ultraspherical derivatives
//! `j'_{nu,delta}(x) = x^{-delta} (J'_nu(x) - delta J_nu(x) / x)` and
//! `y'_{nu,delta}(x) = x^{-delta} (Y'_nu(x) - delta Y_nu(x) / x)`.

pub mod airy;
pub mod bessel;
pub mod uniform;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ZeroKind;

pub use airy::{
    airy_ai, airy_ai_prime, airy_all, airy_bi, airy_bi_prime, airy_bi_prime_zeros,
    bi_prime_zero_interval, AiryValues,
};
pub use bessel::{
    bessel_all, bessel_hankel, bessel_j, bessel_j_prime, bessel_recurrence, bessel_y,
    bessel_y_prime, bessel_y_prime_eval, in_hankel_region, BesselValues,
};
pub use uniform::{
    uniform_j_prime, uniform_point, uniform_prefactor, uniform_y_prime, UniformAsymptoticPoint,
};

/// Width of the turning-point region: the Hankel branch needs `x >= (1 + c) nu`.
pub const REGIME_C: f64 = 0.2;
/// Smallest order for which the uniform (Airy-type) approximation is offered.
pub const TRANSITION_NU_MIN: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// Small-argument series (Temme's form for `Y`).
    PowerSeries,
    /// Continued fractions with recurrence in the order.
    Recurrence,
    /// Hankel's large-argument expansion.
    HankelOscillatory,
    /// Leading-order uniform expansion in Airy functions.
    AiryTransition,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ErrClass {
    AbsTol(f64),
    BigO(String),
}

/// A value together with the evaluator that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeEval {
    pub value: f64,
    pub regime: Regime,
    pub err_class: ErrClass,
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("delta must be finite, got {delta}")))
    }
}

/// `x^{-delta} (F' - delta F / x)` and its `x`-derivative from `F, F'`.
///
/// The derivative uses the Bessel equation `F'' = -F'/x + (nu^2/x^2 - 1) F`:
/// `d/dx [x^{-delta}(F' - delta F/x)] = x^{-delta} (F'' - 2 delta F'/x + delta (1 + delta) F / x^2)`.
fn combine(nu: f64, delta: f64, x: f64, f: f64, fp: f64) -> (f64, f64) {
    let scale = if delta == 0.0 { 1.0 } else { x.powf(-delta) };
    let inv = 1.0 / x;
    let value = scale * (fp - delta * f * inv);
    let fpp = -fp * inv + (nu * nu * inv * inv - 1.0) * f;
    let slope = scale * (fpp - 2.0 * delta * fp * inv + delta * (1.0 + delta) * f * inv * inv);
    (value, slope)
}

fn finite(v: f64, what: &str, nu: f64, x: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{what} overflows at nu = {nu}, x = {x}")))
    }
}

pub fn ultra_j_prime(nu: f64, delta: f64, x: f64) -> Result<f64> {
    ultra_prime(ZeroKind::AZero, nu, delta, x)
}

pub fn ultra_y_prime(nu: f64, delta: f64, x: f64) -> Result<f64> {
    ultra_prime(ZeroKind::BZero, nu, delta, x)
}

/// `j'_{nu,delta}` for [`ZeroKind::AZero`], `y'_{nu,delta}` for [`ZeroKind::BZero`].
pub fn ultra_prime(kind: ZeroKind, nu: f64, delta: f64, x: f64) -> Result<f64> {
    Ok(ultra_prime_with_slope(kind, nu, delta, x)?.0)
}

/// The target function and its derivative in `x`.
pub fn ultra_prime_with_slope(kind: ZeroKind, nu: f64, delta: f64, x: f64) -> Result<(f64, f64)> {
    check_delta(delta)?;
    let b = bessel_all(nu, x)?;
    let (f, fp) = match kind {
        ZeroKind::AZero => (b.j, b.jp),
        ZeroKind::BZero => (b.y, b.yp),
    };
    let (v, s) = combine(nu, delta, x, f, fp);
    Ok((
        finite(v, "ultraspherical derivative", nu, x)?,
        finite(s, "ultraspherical second derivative", nu, x)?,
    ))
}
