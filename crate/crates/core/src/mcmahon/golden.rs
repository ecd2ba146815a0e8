//! Closed forms of the first four zero-series coefficients, transcribed as
//! integer polynomials. The derivation in [`super::pipeline`] must reproduce
//! them exactly; the `delta = 0` and `delta = 1/2` specialisations are kept
//! separately because they are the classical cases.

use num_bigint::BigInt;

use super::poly::BivariatePoly;
use crate::Rat;

fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn scaled(terms: &[(u32, u32, i64)], n: i64, d: i64) -> BivariatePoly<Rat> {
    BivariatePoly::from_integer_terms(terms).scale(&ratio(n, d))
}

const EIGHT3: i64 = 512;
const EIGHT5: i64 = 32_768;
const EIGHT7: i64 = 2_097_152;

/// `c_1 = -(mu + 3 + 8 delta) / 8`.
pub fn c1() -> BivariatePoly<Rat> {
    scaled(&[(1, 0, 1), (0, 0, 3), (0, 1, 8)], -1, 8)
}

pub fn c3() -> BivariatePoly<Rat> {
    scaled(
        &[
            (2, 0, 7),
            (1, 0, 82),
            (1, 1, 144),
            (0, 0, -9),
            (0, 1, 144),
            (0, 2, 192),
            (0, 3, -128),
        ],
        -4,
        3 * EIGHT3,
    )
}

pub fn c5() -> BivariatePoly<Rat> {
    scaled(
        &[
            (3, 0, 83),
            (2, 0, 2075),
            (2, 1, 2920),
            (1, 0, -3039),
            (1, 1, 9040),
            (1, 2, 10560),
            (1, 3, -4480),
            (0, 0, 3537),
            (0, 1, 1800),
            (0, 2, 8640),
            (0, 3, 1920),
            (0, 4, -12800),
            (0, 5, 3072),
        ],
        -32,
        15 * EIGHT5,
    )
}

pub fn c7() -> BivariatePoly<Rat> {
    scaled(
        &[
            (4, 0, 6949),
            (3, 0, 296_492),
            (3, 1, 356_832),
            (2, 0, -1_248_002),
            (2, 1, 2_194_080),
            (2, 2, 2_298_240),
            (2, 3, -743_680),
            (1, 0, 7_414_380),
            (1, 1, 696_864),
            (1, 2, 5_295_360),
            (1, 3, 1_917_440),
            (1, 4, -4_945_920),
            (1, 5, 946_176),
            (0, 0, -5_853_627),
            (0, 1, 913_248),
            (0, 2, 1_330_560),
            (0, 3, 2_338_560),
            (0, 4, -3_225_600),
            (0, 5, -4_902_912),
            (0, 6, 3_555_328),
            (0, 7, -491_520),
        ],
        -64,
        105 * EIGHT7,
    )
}

/// Classical coefficients for zeros of `J'_nu` and `Y'_nu` (`delta = 0`).
pub fn derivative_zeros() -> [BivariatePoly<Rat>; 4] {
    [
        scaled(&[(1, 0, 1), (0, 0, 3)], -1, 8),
        scaled(&[(2, 0, 7), (1, 0, 82), (0, 0, -9)], -4, 3 * EIGHT3),
        scaled(
            &[(3, 0, 83), (2, 0, 2075), (1, 0, -3039), (0, 0, 3537)],
            -32,
            15 * EIGHT5,
        ),
        scaled(
            &[
                (4, 0, 6949),
                (3, 0, 296_492),
                (2, 0, -1_248_002),
                (1, 0, 7_414_380),
                (0, 0, -5_853_627),
            ],
            -64,
            105 * EIGHT7,
        ),
    ]
}

/// Coefficients for zeros of the spherical Bessel derivatives (`delta = 1/2`),
/// still written in `mu = 4 nu^2` of the cylinder order.
pub fn spherical_derivative_zeros() -> [BivariatePoly<Rat>; 4] {
    [
        scaled(&[(1, 0, 1), (0, 0, 7)], -1, 8),
        scaled(&[(2, 0, 7), (1, 0, 154), (0, 0, 95)], -4, 3 * EIGHT3),
        scaled(
            &[(3, 0, 83), (2, 0, 3535), (1, 0, 3561), (0, 0, 6133)],
            -32,
            15 * EIGHT5,
        ),
        scaled(
            &[
                (4, 0, 6949),
                (3, 0, 474_908),
                (2, 0, 330_638),
                (1, 0, 9_046_780),
                (0, 0, -5_075_147),
            ],
            -64,
            105 * EIGHT7,
        ),
    ]
}

/// Outcome of one exact comparison between derived and closed-form coefficients.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GoldenCheck {
    pub name: String,
    pub passed: bool,
    /// First mismatch, as `expected` / `derived` / `difference` lines.
    pub diff: Option<String>,
}

fn compare(name: &str, labels: &[&str], expected: &[BivariatePoly<Rat>], derived: &[BivariatePoly<Rat>]) -> GoldenCheck {
    let diff = labels
        .iter()
        .zip(expected.iter().zip(derived))
        .find(|(_, (e, d))| e != d)
        .map(|(label, (e, d))| format!("{label}\n  expected:   {e}\n  derived:    {d}\n  difference: {}", d - e));
    GoldenCheck {
        name: name.to_string(),
        passed: diff.is_none(),
        diff,
    }
}

/// Runs the exact equality suite: the general coefficients, their `delta = 0`
/// and `delta = 1/2` reductions, and the phase identity of the spherical case.
///
/// With `perturb`, the derived `c_5` has 1 added to its constant term first,
/// which must make the suite fail.
pub fn golden_checks(perturb: bool) -> crate::Result<Vec<GoldenCheck>> {
    let series = super::table::derived_coefficients(4)?;
    let mut derived: Vec<BivariatePoly<Rat>> = [1usize, 3, 5, 7].iter().map(|&p| series.coeff(p).clone()).collect();
    if perturb {
        derived[2].add_term(0, 0, ratio(1, 1));
    }
    let labels = ["c_1", "c_3", "c_5", "c_7"];
    let general = [c1(), c3(), c5(), c7()];
    let at = |v: Rat| -> Vec<BivariatePoly<Rat>> { derived.iter().map(|d| d.substitute_delta(&v)).collect() };
    let mut checks = vec![
        compare("general coefficients", &labels, &general, &derived),
        compare("delta = 0", &labels, &derivative_zeros(), &at(ratio(0, 1))),
        compare("delta = 1/2", &labels, &spherical_derivative_zeros(), &at(ratio(1, 2))),
    ];
    // nu = n + 1/2 moves the offsets -3/4, -1/4 to -1/2, 0 relative to k + n/2
    let shift = ratio(1, 4);
    let offsets_ok = super::table::beta_offset(crate::ZeroKind::AZero) + &shift == ratio(-1, 2)
        && super::table::beta_offset(crate::ZeroKind::BZero) + &shift == ratio(0, 1);
    checks.push(GoldenCheck {
        name: "spherical phase offsets".into(),
        passed: offsets_ok,
        diff: (!offsets_ok).then(|| "beta offsets do not shift to -1/2 and 0".to_string()),
    });
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcmahon::table::derived_coefficients;

    #[test]
    fn derivation_reproduces_closed_forms() {
        let s = derived_coefficients(4).unwrap();
        assert_eq!(s.coeff(1), &c1());
        assert_eq!(s.coeff(3), &c3());
        assert_eq!(s.coeff(5), &c5());
        assert_eq!(s.coeff(7), &c7());
        for j in [0usize, 2, 4, 6] {
            assert!(s.coeff(j).is_zero(), "even coefficient {j} must vanish");
        }
    }

    #[test]
    fn specialisations() {
        let general = [c1(), c3(), c5(), c7()];
        let zero = ratio(0, 1);
        let half = ratio(1, 2);
        for (g, d) in general.iter().zip(derivative_zeros()) {
            assert_eq!(g.substitute_delta(&zero), d);
        }
        for (g, d) in general.iter().zip(spherical_derivative_zeros()) {
            assert_eq!(g.substitute_delta(&half), d);
        }
    }

    #[test]
    fn check_suite_passes_and_detects_perturbation() {
        assert!(golden_checks(false).unwrap().iter().all(|c| c.passed));
        let bad = golden_checks(true).unwrap();
        assert!(!bad[0].passed);
        assert!(bad[0].diff.as_ref().unwrap().starts_with("c_5"));
        assert!(bad[3].passed);
    }

    #[test]
    fn spherical_phase_shift() {
        // (k + (n + 1/2)/2 - 3/4) = k + n/2 - 1/2 and (k + (n + 1/2)/2 - 1/4) = k + n/2,
        // with n in the mu slot and k in the delta slot.
        let n = BivariatePoly::<Rat>::mu();
        let k = BivariatePoly::<Rat>::delta();
        let half = BivariatePoly::constant(ratio(1, 2));
        let nu = &n + &half;
        let phase = |off: Rat| &(&k + &nu.scale(&ratio(1, 2))) + &BivariatePoly::constant(off);
        let expect_a = &(&k + &n.scale(&ratio(1, 2))) - &half;
        let expect_b = &k + &n.scale(&ratio(1, 2));
        assert_eq!(phase(ratio(-3, 4)), expect_a);
        assert_eq!(phase(ratio(-1, 4)), expect_b);
    }
}
