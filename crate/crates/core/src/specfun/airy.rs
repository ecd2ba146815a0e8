//! Airy functions `Ai, Ai', Bi, Bi'` on the real line.
//!
//! For `|x| <= 12` the Maclaurin series is summed in double-double so that the
//! cancellation on the negative axis (terms up to about `1e12`) still leaves
//! full double accuracy. Beyond that the classical asymptotic expansions are
//! summed up to their smallest term.

use std::f64::consts::{FRAC_PI_4, PI};

use once_cell::sync::Lazy;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Switch between the Maclaurin series and the asymptotic expansions.
pub const SERIES_RADIUS: f64 = 12.0;
/// Largest argument for which `Bi` and `Bi'` are evaluated.
pub const BI_CAP: f64 = 100.0;

static AI0: Lazy<DoubleDouble> =
    Lazy::new(|| DoubleDouble::from_decimal("0.355028053887817239260063186004183176397979174199177").expect("valid literal"));
static AIP0: Lazy<DoubleDouble> =
    Lazy::new(|| DoubleDouble::from_decimal("0.258819403792806798405183560189203963479091138354934").expect("valid literal"));

/// `Ai(x), Ai'(x), Bi(x), Bi'(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AiryValues {
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
}

/// Maclaurin series in any [`Real`]; returns `[Ai, Ai', Bi, Bi']`.
///
/// With `c1 = Ai(0)`, `c2 = -Ai'(0)`: `Ai = c1 f - c2 g`, `Bi = sqrt(3) (c1 f + c2 g)`,
/// where `f = sum 3^k (1/3)_k x^{3k} / (3k)!` and `g = sum 3^k (2/3)_k x^{3k+1} / (3k+1)!`.
pub fn airy_series<T: Real>(x: T, c1: T, c2: T) -> [T; 4] {
    let x3 = x * x * x;
    let one = T::one();
    let (mut f, mut g) = (one, x);
    let (mut fp, mut gp) = (T::zero(), one);
    let (mut tf, mut tg) = (one, x);
    let mut tfp = x * x / T::from_f64_lossless(2.0);
    let mut tgp = one;
    fp += tfp;
    let tiny = T::epsilon() * T::epsilon();
    for k in 1..400usize {
        let kk = <T as Real>::from_usize(k);
        let three = T::from_f64_lossless(3.0);
        // f_k / f_{k-1} = x^3 / ((3k-1) 3k), g_k / g_{k-1} = x^3 / (3k (3k+1))
        tf = tf * x3 / ((three * kk - one) * (three * kk));
        tg = tg * x3 / ((three * kk) * (three * kk + one));
        f += tf;
        g += tg;
        // f'_k = x^{3k-1}/(3k-1)! ...: ratio x^3 / ((3k+2)(3k)) from term k to k+1 (k >= 1)
        tfp = tfp * x3 / ((three * kk + T::from_f64_lossless(2.0)) * (three * kk));
        fp += tfp;
        // g'_k / g'_{k-1} = x^3 / (3k (3k-2))
        tgp = tgp * x3 / ((three * kk) * (three * kk - T::from_f64_lossless(2.0)));
        gp += tgp;
        let scale = f.abs() + g.abs() + fp.abs() + gp.abs();
        let last = tf.abs() + tg.abs() + tfp.abs() + tgp.abs();
        if last <= tiny * scale && k > 2 {
            break;
        }
    }
    let sqrt3 = T::from_f64_lossless(3.0).sqrt();
    [
        c1 * f - c2 * g,
        c1 * fp - c2 * gp,
        sqrt3 * (c1 * f + c2 * g),
        sqrt3 * (c1 * fp + c2 * gp),
    ]
}

fn series_f64(x: f64) -> AiryValues {
    let v = airy_series(DoubleDouble::from(x), *AI0, *AIP0);
    AiryValues {
        ai: v[0].hi(),
        aip: v[1].hi(),
        bi: v[2].hi(),
        bip: v[3].hi(),
    }
}

/// Sums `sum_k s_k u_k z^{-k}` for the asymptotic coefficients `u_k` (and
/// `v_k = -(6k+1)/(6k-1) u_k`), split by parity and with sign pattern
/// `(-1)^k` if `alternating`; stops at the smallest term.
struct AsymptoticSums {
    u_even: f64,
    u_odd: f64,
    v_even: f64,
    v_odd: f64,
}

fn asymptotic_sums(zeta: f64, alternating: bool) -> AsymptoticSums {
    let mut out = AsymptoticSums {
        u_even: 1.0,
        u_odd: 0.0,
        v_even: 1.0,
        v_odd: 0.0,
    };
    let mut u = 1.0;
    let mut zpow = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200usize {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        zpow /= zeta;
        let tu = u * zpow;
        let tv = v * zpow;
        let size = tu.abs().max(tv.abs());
        if size >= last {
            break;
        }
        // parity-split sums carry (-1)^{floor(k/2)} when not alternating and (-1)^k when alternating
        let sign = if alternating {
            if k % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        } else if (k / 2) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        if k % 2 == 0 {
            out.u_even += sign * tu;
            out.v_even += sign * tv;
        } else {
            out.u_odd += sign * tu;
            out.v_odd += sign * tv;
        }
        last = size;
        if size < 1e-18 {
            break;
        }
    }
    out
}

fn asymptotic_positive(x: f64) -> AiryValues {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let q = x.sqrt().sqrt();
    let sp = PI.sqrt();
    let alt = asymptotic_sums(zeta, true);
    let ai_sum = alt.u_even + alt.u_odd;
    let aip_sum = alt.v_even + alt.v_odd;
    let bi_sum = plain_sum(zeta, false);
    let bip_sum = plain_sum(zeta, true);
    let em = (-zeta).exp();
    let ep = zeta.exp();
    AiryValues {
        ai: 0.5 / sp / q * em * ai_sum,
        aip: -0.5 / sp * q * em * aip_sum,
        bi: 1.0 / sp / q * ep * bi_sum,
        bip: 1.0 / sp * q * ep * bip_sum,
    }
}

/// `sum_k u_k z^{-k}` (or with `v_k`), all signs positive, to the smallest term.
fn plain_sum(zeta: f64, derivative: bool) -> f64 {
    let mut sum = 1.0;
    let mut u = 1.0;
    let mut zpow = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200usize {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        zpow /= zeta;
        let c = if derivative {
            -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u
        } else {
            u
        };
        let t = c * zpow;
        if t.abs() >= last {
            break;
        }
        sum += t;
        last = t.abs();
        if last < 1e-18 {
            break;
        }
    }
    sum
}

fn asymptotic_negative(t: f64) -> AiryValues {
    let zeta = 2.0 / 3.0 * t * t.sqrt();
    let q = t.sqrt().sqrt();
    let sp = PI.sqrt();
    let s = asymptotic_sums(zeta, false);
    let (sn, cs) = (zeta + FRAC_PI_4).sin_cos();
    AiryValues {
        ai: (sn * s.u_even - cs * s.u_odd) / (sp * q),
        aip: -q / sp * (cs * s.v_even + sn * s.v_odd),
        bi: (cs * s.u_even + sn * s.u_odd) / (sp * q),
        bip: q / sp * (sn * s.v_even - cs * s.v_odd),
    }
}

/// All four Airy functions at `x`.
pub fn airy_all(x: f64) -> Result<AiryValues> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("Airy argument must be finite, got {x}")));
    }
    if x > BI_CAP {
        return Err(Error::Overflow(format!(
            "Bi overflows beyond x = {BI_CAP}; got {x}"
        )));
    }
    Ok(if x.abs() <= SERIES_RADIUS {
        series_f64(x)
    } else if x > 0.0 {
        asymptotic_positive(x)
    } else {
        asymptotic_negative(-x)
    })
}

pub fn airy_ai(x: f64) -> Result<f64> {
    Ok(airy_all(x)?.ai)
}

pub fn airy_ai_prime(x: f64) -> Result<f64> {
    Ok(airy_all(x)?.aip)
}

pub fn airy_bi(x: f64) -> Result<f64> {
    Ok(airy_all(x)?.bi)
}

pub fn airy_bi_prime(x: f64) -> Result<f64> {
    Ok(airy_all(x)?.bip)
}

/// Zeros of `Bi'` as positive magnitudes: `Bi'(-t_k) = 0`, `t_1 < t_2 < ...`.
///
/// Located by a sign-change scan in `t` (step `0.02`) and refined by
/// bisection; the scan does not use any a priori interval for the zeros.
pub fn airy_bi_prime_zeros(count: usize) -> Result<Vec<f64>> {
    let mut zeros = Vec::with_capacity(count);
    let step = 0.02;
    let mut t0 = 0.0;
    let mut f0 = airy_bi_prime(-t0)?;
    while zeros.len() < count {
        let t1 = t0 + step;
        let f1 = airy_bi_prime(-t1)?;
        if f0 == 0.0 {
            if t0 > 0.0 {
                zeros.push(t0);
            }
        } else if f0 * f1 < 0.0 {
            let (mut a, mut b, mut fa) = (t0, t1, f0);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = airy_bi_prime(-m)?;
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fa * fm < 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        t0 = t1;
        f0 = f1;
    }
    Ok(zeros)
}

/// The interval `((3 pi/2 (k - 0.4))^{2/3}, (3 pi/2 (k - 0.1))^{2/3})` that
/// contains the `k`-th zero of `Bi'(-t)`.
pub fn bi_prime_zero_interval(k: usize) -> (f64, f64) {
    let kf = k as f64;
    (
        (1.5 * PI * (kf - 0.4)).powf(2.0 / 3.0),
        (1.5 * PI * (kf - 0.1)).powf(2.0 / 3.0),
    )
}
