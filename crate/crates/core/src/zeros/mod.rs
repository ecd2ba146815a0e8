//! Zeros of `j'_{nu,delta}` and `y'_{nu,delta}`: bracketing, safeguarded Newton
//! refinement, counting, and convergence studies against an independent oracle.
//!
//! Two indices are in play. The *positive index* counts positive zeros in
//! ascending order. The *phase index* is the `k` of the asymptotic expansions
//! (the zero near `h_nu = k - 1/4` or `k - 3/4`). They differ by a constant
//! shift, found by counting sign changes up to the separator between phases
//! `K` and `K + 1`, where `K` is [`phase::large_k_threshold`].

mod ddgamma;
pub mod oracle;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::mcmahon::{expansion_table, NumericExpansion};
use crate::phase::{self, Bracket, BracketSource};
use crate::specfun;
use crate::ZeroKind;

pub use oracle::{oracle_eval, OracleSolver, OracleValue, OracleZero};

/// Order of the expansion used as the Newton starting point.
const GUESS_ORDER: usize = 4;
const MAX_NEWTON: usize = 200;
const MIN_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroQuery {
    pub kind: ZeroKind,
    pub nu: f64,
    pub delta: f64,
    pub k: usize,
    /// Relative tolerance on the zero, at least `1e-14`.
    pub tol: f64,
    /// Read `k` as the phase index of the expansions instead of the positive index.
    pub paper_indexing: bool,
}

impl ZeroQuery {
    pub fn new(kind: ZeroKind, nu: f64, delta: f64, k: usize) -> Self {
        Self {
            kind,
            nu,
            delta,
            k,
            tol: MIN_TOL,
            paper_indexing: false,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_paper_indexing(mut self, on: bool) -> Self {
        self.paper_indexing = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_params(self.nu, self.delta)?;
        if self.k == 0 {
            return Err(Error::Domain("zero index starts at 1".into()));
        }
        if !(self.tol >= MIN_TOL && self.tol.is_finite()) {
            return Err(Error::Domain(format!(
                "tolerance must be at least {MIN_TOL:e}, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

fn check_params(nu: f64, delta: f64) -> Result<()> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::Domain(format!("nu must be finite and >= 0, got {nu}")));
    }
    if !delta.is_finite() {
        return Err(Error::Domain(format!("delta must be finite, got {delta}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroResult {
    pub value: f64,
    /// `|f(value)|`.
    pub residual: f64,
    pub bracket: Bracket,
    pub iterations: usize,
    /// Whether the positive index was established by construction (a full scan
    /// or a proven bracket) rather than by a local search.
    pub index_certified: bool,
    /// Positive index of the zero.
    pub index: usize,
    /// Phase index, `None` when the zero lies below the first phase.
    pub phase_index: Option<usize>,
    /// Natural size of `f` near the zero, `|f'(value)| max(1, value)`;
    /// the residual is at most `tol * scale`.
    pub scale: f64,
}


fn target(kind: ZeroKind, nu: f64, delta: f64, x: f64) -> Result<(f64, f64)> {
    specfun::ultra_prime_with_slope(kind, nu, delta, x)
}

struct Refined {
    value: f64,
    residual: f64,
    iterations: usize,
    scale: f64,
}

/// Safeguarded Newton inside a sign-change interval. A Newton step is taken only
/// if it stays inside the current bracket and reduces `|f|` by at least 10%;
/// otherwise the bracket is bisected. After [`MAX_NEWTON`] iterations the
/// remaining work is pure bisection.
fn refine(kind: ZeroKind, nu: f64, delta: f64, lo: f64, hi: f64, guess: Option<f64>, tol: f64) -> Result<Refined> {
    let (fa, _) = target(kind, nu, delta, lo)?;
    let (fb, _) = target(kind, nu, delta, hi)?;
    if !(fa * fb < 0.0) {
        return Err(Error::ConvergenceFailure(format!(
            "interval [{lo}, {hi}] has no sign change (f = {fa:e}, {fb:e})"
        )));
    }
    let sign_lo = fa.signum();
    let (mut a, mut b) = (lo, hi);
    let mut x = guess.filter(|g| *g > a && *g < b).unwrap_or(0.5 * (a + b));
    let (mut fx, mut dfx) = target(kind, nu, delta, x)?;
    let mut iterations = 0;
    let mut newton_allowed = true;
    let mut converged = false;
    while iterations < 2 * MAX_NEWTON {
        iterations += 1;
        if iterations > MAX_NEWTON {
            newton_allowed = false;
        }
        if fx == 0.0 {
            converged = true;
            break;
        }
        if fx.signum() == sign_lo {
            a = x;
        } else {
            b = x;
        }
        if b - a <= tol * x.abs() {
            converged = true;
            break;
        }
        let mut moved = false;
        if newton_allowed {
            let cand = x - fx / dfx;
            if cand.is_finite() && cand > a && cand < b {
                if (cand - x).abs() <= 0.25 * tol * x.abs() {
                    converged = true;
                    break;
                }
                let (fc, dc) = target(kind, nu, delta, cand)?;
                if fc.abs() <= 0.9 * fx.abs() {
                    x = cand;
                    fx = fc;
                    dfx = dc;
                    moved = true;
                } else if fc != 0.0 {
                    if fc.signum() == sign_lo {
                        a = a.max(cand);
                    } else {
                        b = b.min(cand);
                    }
                }
            }
        }
        if !moved {
            x = 0.5 * (a + b);
            let (f, d) = target(kind, nu, delta, x)?;
            fx = f;
            dfx = d;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure(format!(
            "no convergence in [{lo}, {hi}] after {iterations} iterations"
        )));
    }
    Ok(Refined {
        value: x,
        residual: fx.abs(),
        iterations,
        scale: dfx.abs() * x.abs().max(1.0),
    })
}

const GRID_START: f64 = 1e-12;
const GRID_RATIO: f64 = 1.1;
const GRID_STEP: f64 = PI / 16.0;

/// Sample points on `(0, x_end]`: geometric up to 1, then steps of `pi/16`.
fn scan_grid(x_end: f64) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut x = GRID_START;
    while x < x_end.min(1.0) {
        grid.push(x);
        x *= GRID_RATIO;
    }
    if x_end > 1.0 {
        let mut x = 1.0;
        while x < x_end {
            grid.push(x);
            x += GRID_STEP;
        }
    }
    grid.push(x_end);
    grid
}

struct Scan {
    changes: Vec<(f64, f64)>,
    zero_at_end: bool,
    tangency: bool,
}

fn bisect_f64(kind: ZeroKind, nu: f64, delta: f64, lo: f64, hi: f64) -> Option<f64> {
    let fa = target(kind, nu, delta, lo).ok()?.0;
    let (mut a, mut b) = (lo, hi);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        let fm = target(kind, nu, delta, m).ok()?.0;
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Sign changes of the target on `(0, x_end]`. Points where the evaluator
/// fails or overflows are skipped. A sample much smaller than both neighbours
/// without a sign change triggers 64 extra samples around it.
fn scan(kind: ZeroKind, nu: f64, delta: f64, x_end: f64) -> Scan {
    let eval = |x: f64| -> Option<(f64, f64)> {
        match target(kind, nu, delta, x) {
            Ok((v, _)) if v.is_finite() => Some((x, v)),
            _ => None,
        }
    };
    let mut samples: Vec<(f64, f64)> = scan_grid(x_end).into_iter().filter_map(eval).collect();
    let mut extra = Vec::new();
    for w in samples.windows(3) {
        let (l, m, r) = (w[0], w[1], w[2]);
        let same_sign = l.1 * m.1 > 0.0 && m.1 * r.1 > 0.0;
        if same_sign && m.1.abs() < 0.05 * l.1.abs().min(r.1.abs()) {
            let step = (r.0 - l.0) / 65.0;
            extra.extend((1..=64).filter_map(|i| eval(l.0 + step * i as f64)));
        }
    }
    if !extra.is_empty() {
        samples.extend(extra);
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        samples.dedup_by(|a, b| a.0 == b.0);
    }
    let mut changes = Vec::new();
    let mut zero_at_end = false;
    let mut prev: Option<(f64, f64)> = None;
    for &(x, v) in &samples {
        if v == 0.0 {
            if x == x_end {
                zero_at_end = true;
            }
            continue;
        }
        if let Some((xp, vp)) = prev {
            if vp.signum() != v.signum() {
                changes.push((xp, x));
            }
        }
        prev = Some((x, v));
    }
    let mut tangency = false;
    for pair in changes.windows(2) {
        let ((l1, h1), (l2, h2)) = (pair[0], pair[1]);
        if l2 - h1 < 0.1 {
            if let (Some(z1), Some(z2)) = (bisect_f64(kind, nu, delta, l1, h1), bisect_f64(kind, nu, delta, l2, h2)) {
                if (z2 - z1).abs() < 1e-6 {
                    tangency = true;
                }
            }
        }
    }
    Scan {
        changes,
        zero_at_end,
        tangency,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub count: usize,
    /// Two sign changes closer than `1e-6` were seen (a possible double root).
    pub tangency_warning: bool,
}

/// Number of sign changes of `j'_{nu,delta}` or `y'_{nu,delta}` on `(0, x]`.
pub fn count_zeros(kind: ZeroKind, nu: f64, delta: f64, x: f64) -> Result<ZeroCount> {
    check_params(nu, delta)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("count range end must be positive, got {x}")));
    }
    let s = scan(kind, nu, delta, x);
    Ok(ZeroCount {
        count: s.changes.len() + usize::from(s.zero_at_end),
        tangency_warning: s.tangency,
    })
}

fn beta_prime(kind: ZeroKind, nu: f64, k: f64) -> f64 {
    let offset = match kind {
        ZeroKind::AZero => -0.75,
        ZeroKind::BZero => -0.25,
    };
    (k + 0.5 * nu + offset) * PI
}

/// Computes zeros for one `(kind, nu, delta)`, sharing the low-range scan and
/// the index shift between queries.
#[derive(Clone, Debug)]
pub struct ZeroSolver {
    kind: ZeroKind,
    nu: f64,
    delta: f64,
    tol: f64,
    low: Vec<(f64, f64)>,
    shift: i64,
    guess: crate::mcmahon::ExpansionAt<f64>,
}

impl ZeroSolver {
    pub fn new(kind: ZeroKind, nu: f64, delta: f64) -> Result<Self> {
        check_params(nu, delta)?;
        let k = phase::large_k_threshold(nu, delta);
        let x_k = phase::h_inverse(nu, phase::phase_separator(kind, k))?;
        let low = scan(kind, nu, delta, x_k).changes;
        let expansion: NumericExpansion<f64> = expansion_table(kind, GUESS_ORDER)?.to_numeric();
        Ok(Self {
            kind,
            nu,
            delta,
            tol: MIN_TOL,
            shift: k as i64 - low.len() as i64,
            low,
            guess: expansion.at(nu, delta),
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol >= MIN_TOL && tol.is_finite()) {
            return Err(Error::Domain(format!("tolerance must be at least {MIN_TOL:e}, got {tol}")));
        }
        self.tol = tol;
        Ok(self)
    }

    /// Phase index minus positive index.
    pub fn phase_shift(&self) -> i64 {
        self.shift
    }

    /// Zero with the given positive index (1-based).
    pub fn zero(&self, index: usize) -> Result<ZeroResult> {
        if index == 0 {
            return Err(Error::Domain("zero index starts at 1".into()));
        }
        let phase = index as i64 + self.shift;
        let phase_index = (phase >= 1).then_some(phase as usize);
        let (bracket, certified) = if index <= self.low.len() {
            let (lo, hi) = self.low[index - 1];
            let b = Bracket {
                lo,
                hi,
                kind: self.kind,
                k: phase_index.unwrap_or(0),
                source: BracketSource::Scan,
            };
            (b, true)
        } else {
            let b = phase::bracket_for_zero(self.kind, self.nu, self.delta, phase as usize)?;
            (b, b.source != BracketSource::Scan)
        };
        let guess = phase_index.map(|k| self.guess.eval(k as f64));
        let r = refine(self.kind, self.nu, self.delta, bracket.lo, bracket.hi, guess, self.tol).map_err(|e| match e {
            Error::ConvergenceFailure(_) if bracket.source == BracketSource::Scan && index > self.low.len() => {
                Error::BracketFailure {
                    kind: self.kind,
                    nu: self.nu,
                    delta: self.delta,
                    k: index,
                }
            }
            other => other,
        })?;
        Ok(ZeroResult {
            value: r.value,
            residual: r.residual,
            bracket,
            iterations: r.iterations,
            index_certified: certified,
            index,
            phase_index,
            scale: r.scale,
        })
    }

    /// Zero whose phase index is `k`.
    pub fn zero_at_phase(&self, k: usize) -> Result<ZeroResult> {
        let index = k as i64 - self.shift;
        if index < 1 {
            return Err(Error::Domain(format!(
                "phase index {k} has no positive zero (phase shift {})",
                self.shift
            )));
        }
        self.zero(index as usize)
    }
}

/// The `k`-th positive zero (or the zero of phase index `k` with `paper_indexing`).
pub fn find_zero(q: &ZeroQuery) -> Result<ZeroResult> {
    q.validate()?;
    let solver = ZeroSolver::new(q.kind, q.nu, q.delta)?.with_tol(q.tol)?;
    if q.paper_indexing {
        solver.zero_at_phase(q.k)
    } else {
        solver.zero(q.k)
    }
}

/// Oracle zero in double-double, with the same indexing rules as [`find_zero`].
pub fn oracle_zero_dd(q: &ZeroQuery) -> Result<OracleZero> {
    q.validate()?;
    let mut solver = OracleSolver::new(q.kind, q.nu, q.delta)?;
    if q.paper_indexing {
        solver.zero_at_phase(q.k)
    } else {
        solver.zero(q.k)
    }
}

/// Oracle zero rounded to `f64`.
pub fn oracle_zero(q: &ZeroQuery) -> Result<f64> {
    Ok(oracle_zero_dd(q)?.value.hi())
}

/// Oracle zeros for several positive indices (bisections run in parallel).
pub fn oracle_zeros(kind: ZeroKind, nu: f64, delta: f64, indices: &[usize], paper_indexing: bool) -> Result<Vec<OracleZero>> {
    check_params(nu, delta)?;
    let mut solver = OracleSolver::new(kind, nu, delta)?;
    let shift = if paper_indexing { solver.phase_shift() } else { 0 };
    let mut brackets = Vec::with_capacity(indices.len());
    for &k in indices {
        let index = k as i64 - shift;
        if index < 1 {
            return Err(Error::Domain(format!("phase index {k} has no positive zero")));
        }
        brackets.push(solver.bracket(index as usize)?);
    }
    brackets
        .par_iter()
        .map(|&(lo, hi)| {
            let z = oracle::bisect(kind, nu, delta, DoubleDouble::from(lo), DoubleDouble::from(hi))?;
            if z.half_width > 1e-20 * z.value.hi().abs() {
                return Err(Error::OracleUnavailable(format!(
                    "oracle resolved the zero near {} only to {:e}",
                    z.value.hi(),
                    z.half_width
                )));
            }
            Ok(z)
        })
        .collect()
}

/// `k |zero_k - beta'_k|` over phase indices `10..=k_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneTermCheck {
    /// Largest scaled deviation.
    pub constant: f64,
    /// `(k, k |zero_k - beta'_k|)` in increasing `k`.
    pub samples: Vec<(usize, f64)>,
}

impl OneTermCheck {
    /// Largest scaled deviation for `lo <= k <= hi`.
    pub fn max_over(&self, lo: usize, hi: usize) -> f64 {
        self.samples
            .iter()
            .filter(|(k, _)| *k >= lo && *k <= hi)
            .map(|s| s.1)
            .fold(0.0, f64::max)
    }
}

/// Empirical constant of the one-term law `zero_k = beta'_k + O(1/k)`, using
/// refined zeros (expansion-seeded) at phase indices `10..=k_max`.
pub fn one_term_check(kind: ZeroKind, nu: f64, delta: f64, k_max: usize) -> Result<OneTermCheck> {
    if k_max < 10 {
        return Err(Error::Domain(format!("k_max must be at least 10, got {k_max}")));
    }
    let solver = ZeroSolver::new(kind, nu, delta)?;
    let samples: Vec<(usize, f64)> = (10..=k_max)
        .into_par_iter()
        .map(|k| {
            let z = solver.zero_at_phase(k)?;
            let kf = k as f64;
            Ok((k, kf * (z.value - beta_prime(kind, nu, kf)).abs()))
        })
        .collect::<Result<_>>()?;
    let constant = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    Ok(OneTermCheck { constant, samples })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    /// Truncation order `m`: terms through `beta'^{-(2m-1)}`.
    pub order: usize,
    /// Phase index.
    pub k: usize,
    pub beta_prime: f64,
    pub expansion_value: f64,
    pub oracle_value: f64,
    /// `|expansion - oracle|`, computed in double-double before rounding.
    pub abs_error: f64,
    /// The error is below what the oracle can resolve; excluded from the fit.
    pub precision_floor: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderFit {
    pub order: usize,
    /// Least-squares slope of `ln |error|` against `ln beta'`; `None` with fewer than two usable rows.
    pub slope: Option<f64>,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    pub fits: Vec<OrderFit>,
}

/// Smallest error treated as meaningful.
pub const PRECISION_FLOOR: f64 = 1e-28;
/// Largest phase index accepted by [`convergence_study`].
pub const STUDY_K_MAX: usize = 500;

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Errors of the truncated expansions against oracle zeros, and the fitted
/// log-log slope for each order. `k_list` holds phase indices in `[10, 500]`.
pub fn convergence_study(kind: ZeroKind, nu: f64, delta: f64, k_list: &[usize], order_list: &[usize]) -> Result<ConvergenceStudy> {
    if k_list.is_empty() || order_list.is_empty() {
        return Err(Error::Domain("convergence study needs at least one k and one order".into()));
    }
    if let Some(k) = k_list.iter().find(|k| !(10..=STUDY_K_MAX).contains(*k)) {
        return Err(Error::Domain(format!("study indices must lie in [10, {STUDY_K_MAX}], got {k}")));
    }
    let mut ks = k_list.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let zeros = oracle_zeros(kind, nu, delta, &ks, true)?;
    let nu_dd = DoubleDouble::from(nu);
    let delta_dd = DoubleDouble::from(delta);
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for &order in order_list {
        let exp = expansion_table(kind, order)?.to_numeric::<DoubleDouble>().at(nu_dd, delta_dd);
        let mut points = Vec::new();
        for (&k, z) in ks.iter().zip(&zeros) {
            let kd = DoubleDouble::from(k as f64);
            let value = exp.eval(kd);
            let err = (value - z.value).hi().abs();
            let floor = PRECISION_FLOOR.max(10.0 * z.half_width);
            let beta = exp.beta(kd).hi();
            let precision_floor = err < floor;
            if !precision_floor {
                points.push((beta.ln(), err.ln()));
            }
            rows.push(ConvergenceRow {
                order,
                k,
                beta_prime: beta,
                expansion_value: value.hi(),
                oracle_value: z.value.hi(),
                abs_error: err,
                precision_floor,
            });
        }
        fits.push(OrderFit {
            order,
            slope: least_squares_slope(&points),
            points: points.len(),
        });
    }
    Ok(ConvergenceStudy { rows, fits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_covers_range() {
        let g = scan_grid(10.0);
        assert_eq!(g[0], GRID_START);
        assert_eq!(*g.last().unwrap(), 10.0);
        assert!(g.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= GRID_STEP + 1e-12));
        assert_eq!(scan_grid(1e-13), vec![1e-13]);
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [10.0f64, 20.0, 40.0].iter().map(|b| (b.ln(), (3.0 * b.powi(-5)).ln())).collect();
        assert!((least_squares_slope(&pts).unwrap() + 5.0).abs() < 1e-12);
        assert!(least_squares_slope(&pts[..1]).is_none());
    }

    #[test]
    fn refine_rejects_bracket_without_sign_change() {
        assert!(refine(ZeroKind::AZero, 0.0, 0.0, 4.0, 5.0, None, 1e-14).is_err());
    }
}
