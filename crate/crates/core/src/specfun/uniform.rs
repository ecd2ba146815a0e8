//! Leading-order uniform (Airy-type) approximations of `J'_nu` and `Y'_nu`
//! just past the turning point `x = nu`.
//!
//! With `z = x/nu > 1` and `(2/3)(-zeta)^{3/2} = sqrt(z^2 - 1) - arcsec z`:
//!
//! ```text
//! Y'_nu(nu z) ~  (2/z) ((z^2 - 1) / (-4 zeta))^{1/4} Bi'(nu^{2/3} zeta) / nu^{2/3}
//! J'_nu(nu z) ~ -(2/z) ((z^2 - 1) / (-4 zeta))^{1/4} Ai'(nu^{2/3} zeta) / nu^{2/3}
//! ```
//!
//! and `nu^{2/3} zeta = -(3 pi h_nu(x) / 2)^{2/3}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase;

use super::{airy, ErrClass, Regime, RegimeEval, REGIME_C, TRANSITION_NU_MIN};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformAsymptoticPoint {
    /// `x / nu`.
    pub z: f64,
    /// Olver's variable, negative past the turning point.
    pub zeta: f64,
    /// `nu^{2/3} zeta`.
    pub airy_arg: f64,
}

/// Olver's variables at `x > nu > 0`.
pub fn uniform_point(nu: f64, x: f64) -> Result<UniformAsymptoticPoint> {
    if !(nu > 0.0 && nu.is_finite() && x > nu && x.is_finite()) {
        return Err(Error::Domain(format!(
            "uniform variables need x > nu > 0, got nu = {nu}, x = {x}"
        )));
    }
    let hv = phase::h(nu, x)?;
    let airy_arg = -(1.5 * PI * hv).powf(2.0 / 3.0);
    Ok(UniformAsymptoticPoint {
        z: x / nu,
        zeta: airy_arg / nu.powf(2.0 / 3.0),
        airy_arg,
    })
}

fn check_region(nu: f64, x: f64) -> Result<()> {
    if !(nu >= TRANSITION_NU_MIN) {
        return Err(Error::Regime(format!(
            "uniform approximation needs nu >= {TRANSITION_NU_MIN}, got {nu}"
        )));
    }
    if !(x > nu && x < (1.0 + REGIME_C) * nu) {
        return Err(Error::Regime(format!(
            "uniform approximation needs nu < x < {} nu, got nu = {nu}, x = {x}",
            1.0 + REGIME_C
        )));
    }
    Ok(())
}

/// `(2/z) ((z^2 - 1)/(-4 zeta))^{1/4} / nu^{2/3}`.
fn prefactor(nu: f64, x: f64, p: &UniformAsymptoticPoint) -> f64 {
    let z2m1 = (x - nu) * (x + nu) / (nu * nu);
    2.0 / p.z * (z2m1 / (-4.0 * p.zeta)).powf(0.25) / nu.powf(2.0 / 3.0)
}

/// Leading-order uniform value of `Y'_nu(x)` for `nu >= 50`, `nu < x < 1.2 nu`.
pub fn uniform_y_prime(nu: f64, x: f64) -> Result<RegimeEval> {
    check_region(nu, x)?;
    let p = uniform_point(nu, x)?;
    let value = prefactor(nu, x, &p) * airy::airy_bi_prime(p.airy_arg)?;
    Ok(RegimeEval {
        value,
        regime: Regime::AiryTransition,
        err_class: ErrClass::BigO("nu^{-2/3}".into()),
    })
}

/// Leading-order uniform value of `J'_nu(x)` in the same region.
pub fn uniform_j_prime(nu: f64, x: f64) -> Result<RegimeEval> {
    check_region(nu, x)?;
    let p = uniform_point(nu, x)?;
    let value = -prefactor(nu, x, &p) * airy::airy_ai_prime(p.airy_arg)?;
    Ok(RegimeEval {
        value,
        regime: Regime::AiryTransition,
        err_class: ErrClass::BigO("nu^{-2/3}".into()),
    })
}

/// The amplitude factor multiplying `Bi'` in [`uniform_y_prime`]; exposed so
/// that callers can scale error bounds.
pub fn uniform_prefactor(nu: f64, x: f64) -> Result<f64> {
    let p = uniform_point(nu, x)?;
    Ok(prefactor(nu, x, &p))
}
