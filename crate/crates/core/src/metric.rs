//! The compact-convergence metric on the disk and its certified surrogates.
//!
//! Distance between holomorphic functions is measured by
//!
//! ```text
//! d(f, g) = Σ_{j>=1} λ^j · min{ 1, max_{|z| <= r_j} |f(z) - g(z)| },
//! r_j = 1 - (j+1)^{-α},
//! ```
//!
//! with `λ ∈ (0,1)` and `α > 0`. Convergence in `d` is exactly uniform
//! convergence on compact subsets of the disk. The series is evaluated to
//! `J` terms with the geometric remainder `λ^{J+1}/(1-λ)` folded into the
//! upper endpoint, and each circle maximum is enclosed by
//! [`series::max_modulus_interval`], so [`metric_d`] returns a fully
//! certified two-sided bound.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{self, BoundInterval, TaylorPoly};
use crate::tolerances::QUICK_BRACKET_GUARD;

/// Parameters of the metric and of its numerical evaluation.
///
/// `lambda` and `alpha` define the metric itself; `terms` (series cutoff
/// `J`) and `samples` (circle sample count `M`) only control how tightly
/// it is enclosed. The sequences are pinned as `λ_j = lambda.powi(j)` and
/// `r_j = 1 - ((j+1) as f64).powf(-alpha)` so results reproduce exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricConfig {
    /// Geometric weight base, in (0, 1).
    pub lambda: f64,
    /// Exhaustion exponent, > 0; radius `r_j = 1 - (j+1)^{-alpha}`.
    pub alpha: f64,
    /// Number of series terms evaluated explicitly (J >= 1).
    #[serde(rename = "metric_terms")]
    pub terms: u32,
    /// Circle samples per term (M >= 8).
    #[serde(rename = "circle_samples")]
    pub samples: u32,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            lambda: 0.5,
            alpha: 1.0,
            terms: 60,
            samples: 4096,
        }
    }
}

impl MetricConfig {
    /// Builds and validates a configuration.
    pub fn new(lambda: f64, alpha: f64, terms: u32, samples: u32) -> Result<Self> {
        let cfg = Self {
            lambda,
            alpha,
            terms,
            samples,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks all parameter ranges.
    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda <= 0.0 || self.lambda >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "lambda must lie in (0, 1), got {}",
                self.lambda
            )));
        }
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.terms < 1 {
            return Err(Error::InvalidInput("metric_terms must be >= 1".into()));
        }
        if self.samples < 8 {
            return Err(Error::InvalidInput("circle_samples must be >= 8".into()));
        }
        Ok(())
    }

    /// Weight `λ^j`.
    pub fn lambda_j(&self, j: u32) -> f64 {
        self.lambda.powi(j as i32)
    }

    /// Radius `r_j = 1 - (j+1)^{-alpha}`; lies in (0, 1) for `j >= 1`.
    pub fn r_j(&self, j: u32) -> f64 {
        1.0 - f64::from(j + 1).powf(-self.alpha)
    }

    /// Parses a JSON configuration. Missing fields take defaults; unknown
    /// fields and out-of-range values are rejected.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// The geometric remainder `λ^{J+1}/(1-λ)` of the truncated metric series.
///
/// Every summand is at most `λ^j`, so dropping terms beyond `J` costs at
/// most this much; it is the irreducible width of any certified interval
/// at series cutoff `J`.
pub fn metric_tail_bound(cfg: &MetricConfig) -> f64 {
    cfg.lambda.powi(cfg.terms as i32 + 1) / (1.0 - cfg.lambda)
}

/// Certified two-sided evaluation of the metric between two polynomials.
///
/// Terms are enclosed independently (in parallel, folded in index order so
/// the result does not depend on thread count) and the series remainder is
/// added to the upper endpoint. Identical inputs short-circuit to
/// `[0, tail]`.
pub fn metric_d(f: &TaylorPoly, g: &TaylorPoly, cfg: &MetricConfig) -> Result<BoundInterval> {
    cfg.validate()?;
    let tail = metric_tail_bound(cfg);
    if f.padded_eq(g) {
        return BoundInterval::new(0.0, tail);
    }
    let diff = f.sub(g);
    let enclosures: Vec<BoundInterval> = (1..=cfg.terms)
        .into_par_iter()
        .map(|j| series::max_modulus_interval(&diff, cfg.r_j(j), cfg.samples))
        .collect::<Result<_>>()?;
    let mut lo = 0.0;
    let mut hi = 0.0;
    for (i, b) in enclosures.iter().enumerate() {
        let w = cfg.lambda_j(i as u32 + 1);
        lo += w * b.lo.min(1.0);
        hi += w * b.hi.min(1.0);
    }
    hi += tail;
    BoundInterval::new(lo, hi)
}

/// Cheap certified bracket `(qlo, qhi)` with `qlo <= metric_d.lo` and
/// `metric_d.hi <= qhi`.
///
/// The lower end scores each term by the single sample `z = r_j` (which is
/// bitwise the `j = 0` circle sample of [`series::max_modulus_interval`],
/// so the inequality holds in floating point, not just in exact
/// arithmetic). The upper end replaces the sampled maximum by the
/// coefficient sum plus the same arc correction, with a small additive
/// guard for the pointwise rounding difference between the two routes.
/// Greedy packing/covering uses this to resolve most pairwise decisions
/// without paying for full circle sampling.
pub fn metric_quick_bracket(
    f: &TaylorPoly,
    g: &TaylorPoly,
    cfg: &MetricConfig,
) -> Result<(f64, f64)> {
    cfg.validate()?;
    let deg = f.degree().max(g.degree());
    Ok(QuickBracket::new(cfg, deg).bracket(f, g))
}

/// Precomputed tables for [`metric_quick_bracket`], for callers that
/// evaluate the bracket across many pairs of the same degree.
///
/// Stores `r_j`, `λ^j`, and the running powers of each `r_j` that the
/// per-term coefficient sums consume, so a pairwise call does no
/// recomputation beyond the coefficient norms of the difference. The
/// table entries are produced by the same multiplication chains as the
/// direct computation, so results are bit-identical whether or not a
/// context is reused.
pub(crate) struct QuickBracket {
    radii: Vec<f64>,
    weights: Vec<f64>,
    /// `csum_pows[j][i] = r_j^{i+1}`, the factor of `|a_{i+1}|` in the
    /// coefficient-sum upper bound.
    csum_pows: Vec<Vec<f64>>,
    /// `lips_pows[j][i] = r_j^i`, the factor in the Lipschitz sum.
    lips_pows: Vec<Vec<f64>>,
    samples_f: f64,
    tail: f64,
}

impl QuickBracket {
    /// Builds tables for differences of degree at most `degree`.
    pub(crate) fn new(cfg: &MetricConfig, degree: usize) -> Self {
        let radii: Vec<f64> = (1..=cfg.terms).map(|j| cfg.r_j(j)).collect();
        let mut csum_pows = Vec::with_capacity(radii.len());
        let mut lips_pows = Vec::with_capacity(radii.len());
        for &r in &radii {
            let mut cp = Vec::with_capacity(degree);
            let mut pow = r;
            for _ in 0..degree {
                cp.push(pow);
                pow *= r;
            }
            let mut lp = Vec::with_capacity(degree);
            let mut pow = 1.0;
            for _ in 0..degree {
                lp.push(pow);
                pow *= r;
            }
            csum_pows.push(cp);
            lips_pows.push(lp);
        }
        Self {
            radii,
            weights: (1..=cfg.terms).map(|j| cfg.lambda_j(j)).collect(),
            csum_pows,
            lips_pows,
            samples_f: f64::from(cfg.samples),
            tail: metric_tail_bound(cfg),
        }
    }

    /// The certified bracket `(qlo, qhi)`; requires the difference degree
    /// to be within the table size passed to `new`.
    pub(crate) fn bracket(&self, f: &TaylorPoly, g: &TaylorPoly) -> (f64, f64) {
        match self.accumulate(f, g, f64::INFINITY) {
            Some(pair) => pair,
            None => unreachable!("no early exit at infinite cutoff"),
        }
    }

    /// The bracket with early exit: `None` means a partial sum of the
    /// (nonnegative) lower-bound terms already exceeds `cutoff`, which
    /// certifies `qlo > cutoff` — and hence `qhi > cutoff` as well, since
    /// the additive guard keeps `qhi` strictly above `qlo`. Callers whose
    /// decision at thresholds `<= cutoff` depends only on those two facts
    /// get exactly the answer the full bracket would give, while far-apart
    /// pairs cost a handful of series terms instead of all of them.
    pub(crate) fn bracket_beyond(
        &self,
        f: &TaylorPoly,
        g: &TaylorPoly,
        cutoff: f64,
    ) -> Option<(f64, f64)> {
        self.accumulate(f, g, cutoff)
    }

    fn accumulate(&self, f: &TaylorPoly, g: &TaylorPoly, cutoff: f64) -> Option<(f64, f64)> {
        if f.padded_eq(g) {
            return Some((0.0, self.tail));
        }
        let diff = f.sub(g);
        let coeffs = diff.coeffs();
        debug_assert!(
            coeffs.len() <= self.csum_pows[0].len(),
            "bracket table too small"
        );
        let norms: Vec<f64> = coeffs.iter().map(|&a| series::modulus(a)).collect();
        let mut qlo = 0.0;
        let mut qhi = 0.0;
        for (t, (&r, &w)) in self.radii.iter().zip(&self.weights).enumerate() {
            let sample = series::modulus(diff.eval_unchecked(Complex64::new(r, 0.0)));
            qlo += w * sample.min(1.0);
            if qlo > cutoff {
                return None;
            }
            let cp = &self.csum_pows[t];
            let lp = &self.lips_pows[t];
            let mut csum = 0.0;
            for (i, &nk) in norms.iter().enumerate() {
                csum += nk * cp[i];
            }
            let mut lips = 0.0;
            for (i, &nk) in norms.iter().enumerate() {
                lips += (i + 1) as f64 * nk * lp[i];
            }
            let corr = std::f64::consts::PI * r / self.samples_f * lips;
            qhi += w * (csum + corr).min(1.0);
        }
        Some((qlo, qhi + (self.tail + QUICK_BRACKET_GUARD)))
    }
}

/// Certified lower bound on the metric from coefficient gaps:
///
/// ```text
/// d(f, g) >= Σ_{k>=2} (λ^k r_k^k / 2) · |a_k - b_k|
/// ```
///
/// valid whenever both functions have first coefficient 1 and all later
/// coefficients of modulus at most 1 — then `|f - g| <= 2` on every circle,
/// so no `min{1, ·}` clipping is lost after halving, and the Cauchy
/// estimate `|a_k - b_k| r_k^k <= max_{|z|=r_k} |f - g|` applied to the
/// single term `j = k` gives the bound.
pub fn coeff_distance_lower(f: &TaylorPoly, g: &TaylorPoly, cfg: &MetricConfig) -> Result<f64> {
    cfg.validate()?;
    let one = Complex64::new(1.0, 0.0);
    if f.coeff(1) != one || g.coeff(1) != one {
        return Err(Error::InvalidInput(
            "coefficient lower bound requires normalized inputs (a_1 = b_1 = 1)".into(),
        ));
    }
    for (p, name) in [(f, "f"), (g, "g")] {
        if let Some(k) = (2..=p.degree()).find(|&k| p.coeff(k).norm() > 1.0 + 1e-12) {
            return Err(Error::InvalidInput(format!(
                "coefficient lower bound requires |{name} coefficient a_{k}| <= 1"
            )));
        }
    }
    let n = f.degree().max(g.degree());
    let mut sum = 0.0;
    for k in 2..=n {
        let w = cfg.lambda_j(k as u32) * cfg.r_j(k as u32).powi(k as i32) / 2.0;
        sum += w * series::modulus(f.coeff(k) - g.coeff(k));
    }
    Ok(sum)
}

/// Which closed form bounds the truncation error tail `Σ_{k>n} k r^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailMode {
    /// The looser bound `(n+2) r^{n+1} / (1-r)²`.
    Paper,
    /// The exact sum `r^{n+1} (n+1 - n r) / (1-r)²`.
    Exact,
}

/// Certified bound on the metric distance between any `f` with `|a_k| <= k`
/// and its degree-`n` truncation:
///
/// ```text
/// d(f, f_n) <= Σ_{j=1..J} λ^j · min{1, T_j} + λ^{J+1}/(1-λ),
/// T_j = bound on Σ_{k>n} k r_j^k  per `mode`.
/// ```
///
/// `Exact` evaluates the tail sum in closed form; `Paper` uses the simpler
/// `(n+2) r^{n+1}/(1-r)²` majorant, which dominates it term by term.
pub fn truncation_tail_bound(n: u32, cfg: &MetricConfig, mode: TailMode) -> Result<f64> {
    cfg.validate()?;
    if !(1..=(1u32 << 30)).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "truncation degree must lie in [1, 2^30], got {n}"
        )));
    }
    let n_f = f64::from(n);
    let mut sum = 0.0;
    for j in 1..=cfg.terms {
        let r = cfg.r_j(j);
        let head = r.powi(n as i32 + 1);
        let denom = (1.0 - r) * (1.0 - r);
        let t = match mode {
            TailMode::Paper => (n_f + 2.0) * head / denom,
            TailMode::Exact => head * (n_f + 1.0 - n_f * r) / denom,
        };
        sum += cfg.lambda_j(j) * t.min(1.0);
    }
    Ok(sum + metric_tail_bound(cfg))
}
