//! Double-precision Bessel functions `J_nu, Y_nu` and their derivatives.
//!
//! Three evaluators, chosen by argument:
//! - `x < 2`: Temme's series for `Y_mu, Y_{mu+1}` with `|mu| <= 1/2`, then
//!   upward recurrence in the order; `J` from the continued fraction ratio and
//!   the Wronskian.
//! - `2 <= x` when Hankel's expansion is not yet accurate: Steed's method
//!   (continued fractions CF1 and CF2).
//! - large `x` with `x >= max(1.2 nu, 10)`: Hankel's expansion, truncated at its
//!   smallest term, used only when that term is below double resolution.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};

use super::{ErrClass, Regime, RegimeEval};

/// Taylor coefficients of `1/Gamma(z)` about `z = 0`, starting at `z^1`.
const RGAMMA: [f64; 28] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_9,
    -0.042_002_635_034_095_24,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_34,
    -0.009_621_971_527_876_974,
    0.007_218_943_246_663_1,
    -0.001_165_167_591_859_065,
    -0.000_215_241_674_114_951,
    0.000_128_050_282_388_116_2,
    -0.000_020_134_854_780_788_24,
    -0.000_001_250_493_482_142_671,
    0.000_001_133_027_231_981_696,
    -2.056_338_416_977_607e-7,
    6.116_095_104_481_416e-9,
    5.002_007_644_469_223e-9,
    -1.181_274_570_487_02e-9,
    1.043_426_711_691_1e-10,
    7.782_263_439_905_071e-12,
    -3.696_805_618_642_206e-12,
    5.100_370_287_454_476e-13,
    -2.058_326_053_566_507e-14,
    -5.348_122_539_423_018e-15,
    1.226_778_628_238_261e-15,
    -1.181_259_301_697_459e-16,
    1.186_692_254_751_6e-18,
    1.412_380_655_318_032e-18,
];

/// Temme's auxiliary functions for `|x| <= 1/2`:
/// `gam1 = (1/Gamma(1-x) - 1/Gamma(1+x)) / (2x)`, `gam2 = (1/Gamma(1-x) + 1/Gamma(1+x)) / 2`,
/// plus `1/Gamma(1+x)` and `1/Gamma(1-x)`.
fn temme_gammas(x: f64) -> (f64, f64, f64, f64) {
    let x2 = x * x;
    // 1/Gamma(1+x) = sum_k RGAMMA[k] x^k: even part -> gam2, odd part -> -gam1
    let mut even = 0.0;
    let mut odd = 0.0;
    for k in (0..RGAMMA.len()).rev() {
        if k % 2 == 0 {
            even = even * x2 + RGAMMA[k];
        } else {
            odd = odd * x2 + RGAMMA[k];
        }
    }
    let gam2 = even;
    let gam1 = -odd;
    let rg_plus = gam2 - x * gam1;
    let rg_minus = gam2 + x * gam1;
    (gam1, gam2, rg_plus, rg_minus)
}

/// `J_nu, Y_nu, J'_nu, Y'_nu` at one point, plus the evaluator that produced them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselValues {
    pub j: f64,
    pub y: f64,
    pub jp: f64,
    pub yp: f64,
    pub regime: Regime,
    /// Estimated absolute error relative to the local amplitude `sqrt(2/(pi x))`.
    pub err: f64,
}

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const RESCALE: f64 = 1e200;
const CF_MAXIT: usize = 200_000;
/// Below this, Temme's series; above, Steed's continued fractions.
const TEMME_MAX_X: f64 = 2.0;
/// Largest relative truncation error accepted from the Hankel branch.
const HANKEL_TOL: f64 = 2e-17;

pub(crate) fn check_args(nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::Domain(format!("order must be finite and >= 0, got {nu}")));
    }
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("argument must be finite and > 0, got {x}")));
    }
    Ok(())
}

/// Hankel branch applicability: `x >= max((1+c) nu, 10)` with `c = 0.2`.
pub fn in_hankel_region(nu: f64, x: f64) -> bool {
    x >= (1.0 + super::REGIME_C) * nu && x >= 10.0
}

/// Evaluates all four functions.
pub fn bessel_all(nu: f64, x: f64) -> Result<BesselValues> {
    check_args(nu, x)?;
    if in_hankel_region(nu, x) {
        if let Some(v) = hankel(nu, x) {
            return Ok(v);
        }
    }
    let v = steed_temme(nu, x)?;
    if !(v.j.is_finite() && v.y.is_finite() && v.jp.is_finite() && v.yp.is_finite()) {
        return Err(Error::Overflow(format!(
            "Bessel functions of order {nu} overflow at x = {x}"
        )));
    }
    Ok(v)
}

/// Hankel's expansion; `None` when its smallest term is not small enough.
pub fn hankel(nu: f64, x: f64) -> Option<BesselValues> {
    let mu = 4.0 * nu * nu;
    let inv8x = 1.0 / (8.0 * x);
    // a_k / x^k and the R/S companion (mu + 4k^2 - 1) a_{k-1} / (8k x^k)
    let mut a_prev = 1.0;
    let (mut p, mut q, mut r, mut s) = (1.0, 0.0, 1.0, 0.0);
    let mut last = f64::INFINITY;
    let mut converged = false;
    let mut err = 0.0;
    for k in 1..200usize {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let a = a_prev * (mu - odd * odd) * inv8x / kf;
        let b = a_prev * (mu + 4.0 * kf * kf - 1.0) * inv8x / kf;
        let size = a.abs().max(b.abs());
        if size > 0.5 {
            // terms this large cancel away the precision of the sum
            return None;
        }
        if size >= last && kf > nu {
            // smallest term passed; the remainder is bounded by it
            err = last;
            converged = true;
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
            r += sign * b;
        } else {
            q += sign * a;
            s += sign * b;
        }
        if size == 0.0 {
            err = 0.0;
            converged = true;
            break;
        }
        if size < EPS * 1e-3 {
            err = size;
            converged = true;
            break;
        }
        last = size;
        a_prev = a;
    }
    if !converged || err > HANKEL_TOL {
        return None;
    }
    let (sx, cx) = x.sin_cos();
    // chi = x - phi with phi = (nu/2 + 1/4) pi, reduced exactly in units of pi
    let turns = (nu / 2.0 + 0.25).rem_euclid(2.0);
    let (sp, cp) = (PI * turns).sin_cos();
    let sin_chi = sx * cp - cx * sp;
    let cos_chi = cx * cp + sx * sp;
    let amp = (FRAC_2_PI / x).sqrt();
    Some(BesselValues {
        j: amp * (p * cos_chi - q * sin_chi),
        y: amp * (p * sin_chi + q * cos_chi),
        jp: -amp * (r * sin_chi + s * cos_chi),
        yp: amp * (r * cos_chi - s * sin_chi),
        regime: Regime::HankelOscillatory,
        err: err + 4.0 * EPS,
    })
}

/// Temme (small `x`) or Steed (moderate `x`), with recurrence in the order.
fn steed_temme(xnu: f64, x: f64) -> Result<BesselValues> {
    let nl = if x < TEMME_MAX_X {
        (xnu + 0.5).floor() as usize
    } else {
        (xnu - x + 1.5).floor().max(0.0) as usize
    };
    let xmu = xnu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: f = J'_nu / J_nu
    let mut isign = 1.0;
    let mut h = (xnu * xi).max(FPMIN);
    let mut b = xi2 * xnu;
    let mut d = 0.0;
    let mut c = h;
    let mut cf1_ok = false;
    for _ in 0..CF_MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            cf1_ok = true;
            break;
        }
    }
    if !cf1_ok {
        return Err(Error::ConvergenceFailure(format!(
            "continued fraction for J'/J did not converge at nu = {xnu}, x = {x}"
        )));
    }

    // downward recurrence from nu to mu with unnormalised values
    let mut rjl = isign;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let rjp1 = rjpl;
    let mut scale_pow = 0i32;
    let mut fact = xnu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > RESCALE {
            rjl /= RESCALE;
            rjpl /= RESCALE;
            scale_pow += 1;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, rymu, ry1, regime) = if x < TEMME_MAX_X {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, rg_plus, rg_minus) = temme_gammas(xmu);
        let mut ff = FRAC_2_PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let e = e.exp();
        let mut p = e / (rg_plus * PI);
        let mut q = 1.0 / (e * PI * rg_minus);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let d = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..=10_000usize {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ConvergenceFailure(format!(
                "Temme series did not converge at x = {x}"
            )));
        }
        let rymu = -sum;
        let ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        let rjmu = w / (rymup - f * rymu);
        (rjmu, rymu, ry1, Regime::PowerSeries)
    } else {
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut converged = false;
        for i in 2..=CF_MAXIT {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ConvergenceFailure(format!(
                "continued fraction CF2 did not converge at x = {x}"
            )));
        }
        let gam = (p - f) / q;
        let rjmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
        let rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        let ry1 = xmu * xi * rymu - rymup;
        (rjmu, rymu, ry1, Regime::Recurrence)
    };

    let fact = rjmu / rjl;
    let mut j = rjl1 * fact;
    let mut jp = rjp1 * fact;
    for _ in 0..scale_pow {
        j /= RESCALE;
        jp /= RESCALE;
    }
    let mut ymu = rymu;
    let mut y1 = ry1;
    for i in 1..=nl {
        let ytemp = (xmu + i as f64) * xi2 * y1 - ymu;
        ymu = y1;
        y1 = ytemp;
    }
    let y = ymu;
    let yp = xnu * xi * ymu - y1;
    Ok(BesselValues {
        j,
        y,
        jp,
        yp,
        regime,
        err: 1e-14,
    })
}

pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_all(nu, x)?.j)
}

pub fn bessel_y(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_all(nu, x)?.y)
}

pub fn bessel_j_prime(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_all(nu, x)?.jp)
}

pub fn bessel_y_prime(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_all(nu, x)?.yp)
}

/// `Y'_nu(x)` tagged with the evaluator used.
pub fn bessel_y_prime_eval(nu: f64, x: f64) -> Result<RegimeEval> {
    let v = bessel_all(nu, x)?;
    let err_class = match v.regime {
        Regime::HankelOscillatory => ErrClass::AbsTol(v.err * (FRAC_2_PI / x).sqrt()),
        _ => ErrClass::AbsTol(v.err * v.yp.abs().max((FRAC_2_PI / x).sqrt())),
    };
    Ok(RegimeEval {
        value: v.yp,
        regime: v.regime,
        err_class,
    })
}

/// Hankel branch forced (for regime cross-checks); errors outside its region.
pub fn bessel_hankel(nu: f64, x: f64) -> Result<BesselValues> {
    check_args(nu, x)?;
    if !in_hankel_region(nu, x) {
        return Err(Error::Regime(format!(
            "Hankel branch needs x >= max(1.2 nu, 10); got nu = {nu}, x = {x}"
        )));
    }
    hankel(nu, x).ok_or_else(|| {
        Error::Regime(format!(
            "Hankel expansion not accurate to double precision at nu = {nu}, x = {x}"
        ))
    })
}

/// Steed/Temme branch forced (for regime cross-checks).
pub fn bessel_recurrence(nu: f64, x: f64) -> Result<BesselValues> {
    check_args(nu, x)?;
    steed_temme(nu, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn temme_gamma_at_half() {
        // 1/Gamma(3/2) = 2/sqrt(pi), 1/Gamma(1/2) = 1/sqrt(pi)
        let (_, _, plus, minus) = temme_gammas(0.5);
        assert!((plus - 2.0 / PI.sqrt()).abs() < 1e-15);
        assert!((minus - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hankel_declines_small_arguments() {
        assert!(hankel(0.0, 10.0).is_none());
        assert!(hankel(0.0, 40.0).is_some());
    }
}
