//! Truncation and the coefficient-grid ε-net for the de Branges class.
//!
//! The upper entropy bound combines two approximations: cut a function
//! down to degree `n` (cost bounded by the truncation tail bound), then
//! snap each remaining coefficient to a grid of spacing `k/K` per axis
//! (cost at most `Σ_j λ_j · n²/K` in the metric). Choosing
//! `K = ⌈C n²/τ⌉` with `C = λ/(1-λ)` balances the two parts, giving a
//! covering of the whole class by at most `(2K+1)^{2n}` centers of radius
//! `radius_hi <= 2τ`.
//!
//! The grid centers satisfy only `|q_k| <= √2·k`, i.e. they may lie
//! slightly outside the class being covered: this is an external net,
//! flagged by [`NetCertificate::internal`] `= false`.

use num_complex::Complex64;
use serde::Serialize;

use crate::classes::{is_member, ClassId};
use crate::error::{Error, Result};
use crate::metric::{truncation_tail_bound, MetricConfig, TailMode};
use crate::series::TaylorPoly;
use crate::tolerances::QUANTIZE_MEMBER_TOL;

/// Certificate that `(2K+1)^{2n}` grid polynomials of degree <= n cover
/// the de Branges class to radius `radius_hi`.
#[derive(Debug, Clone, Serialize)]
pub struct NetCertificate {
    /// Truncation degree.
    pub n: u32,
    /// Grid resolution; each coefficient axis takes values in
    /// `{-K, ..., K} · k/K`. Serialized as a decimal string because fine
    /// grids exceed the JSON number range.
    #[serde(serialize_with = "super::u128_as_string")]
    pub k: u128,
    /// `2n · ln(2K+1)`, the log of the number of centers.
    pub log_count: f64,
    /// Certified covering radius.
    pub radius_hi: f64,
    /// False: centers may lie outside the covered class (external net).
    pub internal: bool,
}

/// The degree-`min(n, deg f)` partial sum of `f`.
///
/// Truncation preserves the de Branges class, and the metric distance to
/// the original is bounded by [`truncation_tail_bound`].
pub fn truncate(f: &TaylorPoly, n: u32) -> Result<TaylorPoly> {
    if n < 1 {
        return Err(Error::InvalidInput("truncation degree must be >= 1".into()));
    }
    let keep = (n as usize).min(f.degree());
    TaylorPoly::new(f.coeffs()[..keep].to_vec())
}

/// Snaps each coefficient of `p` to the nearest grid point
/// `q_k = k (s_k + i t_k)/K`, `s_k, t_k ∈ {-K, ..., K}`.
///
/// Requires `p` in the de Branges class with `deg p <= n`. Per-axis
/// rounding error is at most `k/(2K)`, so `|p_k - q_k| <= k/(√2 K) <= n/K`.
/// Returns the quantized polynomial together with the per-coefficient
/// errors `|p_k - q_k|`.
pub fn quantize_to_net(p: &TaylorPoly, n: u32, k_grid: u64) -> Result<(TaylorPoly, Vec<f64>)> {
    if k_grid < 1 {
        return Err(Error::InvalidInput("grid resolution K must be >= 1".into()));
    }
    if n < 1 || p.degree() > n as usize {
        return Err(Error::InvalidInput(format!(
            "quantizer requires deg p <= n, got deg = {} and n = {n}",
            p.degree()
        )));
    }
    if !is_member(p, ClassId::ClassBDeBranges, QUANTIZE_MEMBER_TOL)? {
        return Err(Error::InvalidInput(
            "quantizer input must satisfy the de Branges bound |a_k| <= k".into(),
        ));
    }
    let kk = k_grid as f64;
    let mut coeffs = Vec::with_capacity(p.degree());
    let mut errs = Vec::with_capacity(p.degree());
    for (i, &a) in p.coeffs().iter().enumerate() {
        let deg = (i + 1) as f64;
        let s = (kk * a.re / deg).round().clamp(-kk, kk);
        let t = (kk * a.im / deg).round().clamp(-kk, kk);
        let scale = deg / kk;
        let q = Complex64::new(s * scale, t * scale);
        errs.push((a - q).norm());
        coeffs.push(q);
    }
    Ok((TaylorPoly::new(coeffs)?, errs))
}

/// Chooses the grid resolution for degree `n` and certifies the covering
/// radius.
///
/// With `τ` the exact truncation tail bound and `C = λ/(1-λ)`, the
/// resolution `K = ⌈C n²/τ⌉` makes the quantization cost `C n²/K <= τ`
/// (the ceiling is nudged up if rounding in the division says otherwise),
/// so every class member is within `radius_hi = C n²/K + τ <= 2τ` of a
/// center of the degree-`n` grid.
pub fn net_upper_point(n: u32, cfg: &MetricConfig) -> Result<NetCertificate> {
    cfg.validate()?;
    let tau = truncation_tail_bound(n, cfg, TailMode::Exact)?;
    if tau <= 0.0 || tau.is_nan() {
        return Err(Error::TailUnderflow { n });
    }
    let c = cfg.lambda / (1.0 - cfg.lambda);
    let n_f = f64::from(n);
    let target = c * n_f * n_f / tau;
    if !target.is_finite() || target >= 1e36 {
        return Err(Error::TailUnderflow { n });
    }
    let mut k = target.ceil() as u128;
    if k < 1 {
        k = 1;
    }
    // Guarantee C n²/K <= τ in floating point, not just in exact
    // arithmetic; the ceiling can land one ulp short.
    let mut bumps = 0;
    while c * n_f * n_f / (k as f64) > tau {
        k += 1;
        bumps += 1;
        assert!(bumps < 64, "grid bump loop failed to terminate");
    }
    let radius_hi = c * n_f * n_f / (k as f64) + tau;
    let log_count = f64::from(2 * n) * (2.0 * (k as f64) + 1.0).ln();
    Ok(NetCertificate {
        n,
        k,
        log_count,
        radius_hi,
        internal: false,
    })
}
