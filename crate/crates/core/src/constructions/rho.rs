//! The admissible packing modulus ρ.
//!
//! The quadratic-exponent lower bound needs a single modulus `ρ ∈ (0, λ)`
//! with integer reciprocal such that
//!
//! ```text
//! (min_{2<=k<=n} λ^k r_k^k / 6) / n²  >=  ρ^n        for all n >= 2.
//! ```
//!
//! [`compute_rho`] finds the largest such `ρ = 1/q` by scanning integer
//! denominators, checking the constraint numerically for `2 <= n <= n_max`
//! (in the log domain — the raw quantities underflow long before
//! `n = 200`) and then certifying the infinite tail `n > n_max` by a
//! monotonicity argument.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::MetricConfig;

/// Largest denominator tried before giving up.
const MAX_DENOMINATOR: u64 = 1_000_000;

/// Width of the explicitly checked window in the tail certification.
const TAIL_WINDOW: u32 = 256;

/// An admissible packing modulus with its verification status.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Rho {
    /// The modulus, `1/denominator`.
    pub rho: f64,
    /// Integer reciprocal `q`.
    pub denominator: u64,
    /// The constraint was checked numerically for `2 <= n <= n_verified`.
    pub n_verified: u32,
    /// The `n` with the least slack among those checked (the binding
    /// constraint).
    pub binding_n: u32,
    /// True when the analytic tail argument confirms the constraint for
    /// every `n > n_verified` as well.
    pub tail_certified: bool,
}

/// `ln(λ^k r_k^k) = k ln λ + k ln r_k` for the weight at coefficient `k`.
fn ln_weight(cfg: &MetricConfig, k: u32) -> f64 {
    f64::from(k) * cfg.lambda.ln() + f64::from(k) * cfg.r_j(k).ln()
}

/// Finds the largest admissible `ρ = 1/q < λ` for the given range.
///
/// The returned value is independent of `n_max` as soon as `n_max` covers
/// the binding constraint (n = 2 for the default configuration): larger
/// `n` only add slack because the left side decays like `λ^n` while the
/// right side decays like the strictly smaller `ρ^n`.
pub fn compute_rho(cfg: &MetricConfig, n_max: u32) -> Result<Rho> {
    cfg.validate()?;
    if n_max < 2 {
        return Err(Error::InvalidInput(format!(
            "rho verification range needs n_max >= 2, got {n_max}"
        )));
    }

    // ln of (min_{2<=k<=n} λ^k r_k^k / 6) / n², built incrementally.
    let mut ln_g = Vec::with_capacity((n_max - 1) as usize);
    let mut running_min = f64::INFINITY;
    for n in 2..=n_max {
        running_min = running_min.min(ln_weight(cfg, n));
        ln_g.push(running_min - 6.0_f64.ln() - 2.0 * f64::from(n).ln());
    }

    let mut q = (1.0 / cfg.lambda).floor() as u64 + 1;
    while 1.0 / (q as f64) >= cfg.lambda {
        q += 1;
    }

    while q <= MAX_DENOMINATOR {
        let ln_q = (q as f64).ln();
        let mut admissible = true;
        let mut binding_n = 2;
        let mut min_slack = f64::INFINITY;
        for (i, &g) in ln_g.iter().enumerate() {
            let n = i as u32 + 2;
            // Constraint g(n) >= ρ^n  ⇔  ln g(n) + n ln q >= 0.
            let slack = g + f64::from(n) * ln_q;
            if slack < 0.0 {
                admissible = false;
                break;
            }
            if slack < min_slack {
                min_slack = slack;
                binding_n = n;
            }
        }
        if admissible {
            return Ok(Rho {
                rho: 1.0 / (q as f64),
                denominator: q,
                n_verified: n_max,
                binding_n,
                tail_certified: certify_tail(cfg, q, n_max),
            });
        }
        q += 1;
    }

    Err(Error::RhoSearchFailed {
        lambda: cfg.lambda,
        max_denominator: MAX_DENOMINATOR,
    })
}

/// Certifies `(min_{2<=k<=n} λ^k r_k^k / 6) / n² >= ρ^n` for all
/// `n > n_max`, given that it holds on `2..=n_max`.
///
/// Writing `w(k) = λ^k r_k^k`, the constraint at `n` splits by where the
/// minimum is attained:
///
/// * `k <= n_max`: enough that `ρ^{-m} >= (1 + m/n_max)²` for all
///   excess `m = n - n_max >= 1`, on top of the already-checked `n_max`
///   constraint. The gap `φ(m) = m ln(1/ρ) - 2 ln(1 + m/n_max)` has
///   increasing derivative, so checking `m` up to `⌈2/ln(1/ρ)⌉` and
///   nonnegativity there settles every larger `m`.
/// * `k > n_max`: since `6n²ρ^n` decreases beyond `n_max` (checked), it
///   suffices that `t(k) = k ln(λ/ρ) + k ln r_k - ln(6k²) >= 0` for each
///   new `k`. This is checked directly on a window past `n_max`. Beyond
///   the window, `-ln r_k = -ln(1 - s_k)` with `s_k = (k+1)^{-α}` is at
///   most `s_H/(1 - s_H)` (s is decreasing), so
///   `t(k) >= k·c* - ln(6k²)` with `c* = ln(λ/ρ) - s_H/(1 - s_H)`; when
///   `c* > 0` that minorant increases for `k >= 2/c*` and its value at
///   the window edge settles the rest.
///
/// Any check that fails simply reports `false`; the constraint then holds
/// as far as it was tested numerically, no further.
fn certify_tail(cfg: &MetricConfig, q: u64, n_max: u32) -> bool {
    let ln_rho_inv = (q as f64).ln();

    // 6n²ρ^n decreasing for n >= n_max: ρ((n+1)/n)² < 1 at n = n_max
    // (the ratio only shrinks as n grows).
    let worst_ratio = -ln_rho_inv + 2.0 * (f64::from(n_max + 1) / f64::from(n_max)).ln();
    if worst_ratio >= 0.0 {
        return false;
    }

    // Branch A: minimum attained at some k <= n_max.
    let m_star = ((2.0 / ln_rho_inv).ceil() as u32).max(1);
    for m in 1..=m_star {
        let phi = f64::from(m) * ln_rho_inv - 2.0 * (1.0 + f64::from(m) / f64::from(n_max)).ln();
        if phi < 0.0 {
            return false;
        }
    }

    // Branch B: minimum attained at a new k > n_max.
    let ln_lam_over_rho = cfg.lambda.ln() + ln_rho_inv;
    if ln_lam_over_rho <= 0.0 {
        return false; // ρ >= λ; never reached after compute_rho's search.
    }
    let high = n_max + TAIL_WINDOW;
    let t = |k: u32| {
        f64::from(k) * ln_lam_over_rho + f64::from(k) * cfg.r_j(k).ln()
            - (6.0 * f64::from(k) * f64::from(k)).ln()
    };
    for k in (n_max + 1)..=high {
        if t(k) < 0.0 {
            return false;
        }
    }
    let s_high = f64::from(high + 1).powf(-cfg.alpha);
    let c_star = ln_lam_over_rho - s_high / (1.0 - s_high);
    if c_star <= 0.0 {
        return false;
    }
    let minorant = |k: f64| k * c_star - (6.0 * k * k).ln();
    f64::from(high) >= 2.0 / c_star && minorant(f64::from(high + 1)) >= 0.0
}
