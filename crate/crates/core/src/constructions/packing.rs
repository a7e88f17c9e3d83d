//! The indexed packing family and its separation certificate.
//!
//! For `n >= 2`, `K >= 1` and an index vector `t = (t_2, ..., t_n)` with
//! entries in `{1, ..., K}`, the class-`A` member is
//!
//! ```text
//! f_t(z) = z + Σ_{k=2..n} (1/(kn)) (t_k/K) z^k,
//! ```
//!
//! giving `K^{n-1}` functions whose pairwise coefficient gaps are at least
//! `1/(knK)` wherever the indices differ. Through the coefficient lower
//! bound on the metric, any two distinct members are separated by
//!
//! ```text
//! separation_lo = min_{2<=k<=n} (λ^k r_k^k / 2) / (n² K),
//! ```
//!
//! so no ball of radius `separation_lo / 3` can contain two of them and
//! the family size is a covering-number lower bound at that radius.
//!
//! A `convex` variant scales weights by an extra `1/k` so the members meet
//! the stronger `Σ k²|a_k| <= 1` sufficient condition; its separation
//! denominator becomes `n³ K`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::MetricConfig;
use crate::series::TaylorPoly;

/// Which sufficient-condition class the packing family targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PackingFamily {
    /// Members in class `A` (weights `1/(kn)`).
    #[serde(rename = "A")]
    ClassA,
    /// Members satisfying the convexity-sufficient condition
    /// (weights `1/(k²n)`).
    #[serde(rename = "convex")]
    Convex,
}

impl PackingFamily {
    /// CLI-facing name.
    pub fn name(self) -> &'static str {
        match self {
            PackingFamily::ClassA => "A",
            PackingFamily::Convex => "convex",
        }
    }
}

impl std::str::FromStr for PackingFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(PackingFamily::ClassA),
            "convex" => Ok(PackingFamily::Convex),
            other => Err(Error::InvalidInput(format!(
                "unknown packing family \"{other}\" (expected A or convex)"
            ))),
        }
    }
}

/// Certificate that `count` functions are pairwise `separation_lo`-apart,
/// hence `N(delta) >= count` at `delta = separation_lo / 3`.
#[derive(Debug, Clone, Serialize)]
pub struct PackingCertificate {
    /// Family the members belong to.
    pub family: PackingFamily,
    /// Top coefficient degree of the members.
    pub n: u32,
    /// Indices per coefficient run over `{1, ..., k}`.
    pub k: u64,
    /// Number of members, `k^(n-1)`; serialized as a decimal string
    /// because counts routinely exceed the JSON number range.
    #[serde(serialize_with = "super::u128_as_string")]
    pub count: u128,
    /// Certified pairwise metric separation.
    pub separation_lo: f64,
    /// Ball radius at which `count` lower-bounds the covering number
    /// (`separation_lo / 3`).
    pub delta: f64,
}

fn check_n_k(n: u32, k: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "packing needs n >= 2, got {n}"
        )));
    }
    if k < 1 {
        return Err(Error::InvalidInput("packing needs K >= 1".into()));
    }
    Ok(())
}

/// The member indexed by `t` in the class-`A` family.
pub fn packing_member(n: u32, k: u64, t: &[u64]) -> Result<TaylorPoly> {
    packing_member_in(PackingFamily::ClassA, n, k, t)
}

/// The member indexed by `t = (t_2, ..., t_n)`, entries in `{1, ..., K}`.
pub fn packing_member_in(family: PackingFamily, n: u32, k: u64, t: &[u64]) -> Result<TaylorPoly> {
    check_n_k(n, k)?;
    if t.len() != (n - 1) as usize {
        return Err(Error::InvalidInput(format!(
            "index vector must have length n-1 = {}, got {}",
            n - 1,
            t.len()
        )));
    }
    if let Some(bad) = t.iter().find(|&&tk| tk < 1 || tk > k) {
        return Err(Error::InvalidInput(format!(
            "index entry {bad} outside {{1, ..., {k}}}"
        )));
    }
    let n_f = f64::from(n);
    let k_f = k as f64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n as usize];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for (i, &tk) in t.iter().enumerate() {
        let deg = (i + 2) as f64;
        let weight = match family {
            PackingFamily::ClassA => 1.0 / (deg * n_f),
            PackingFamily::Convex => 1.0 / (deg * deg * n_f),
        };
        coeffs[i + 1] = Complex64::new(weight * (tk as f64) / k_f, 0.0);
    }
    TaylorPoly::new(coeffs)
}

/// Separation certificate for the `(n, K)` family under `cfg`.
pub fn packing_certificate(n: u32, k: u64, cfg: &MetricConfig) -> Result<PackingCertificate> {
    packing_certificate_in(PackingFamily::ClassA, n, k, cfg)
}

/// Separation certificate for the chosen family.
///
/// Distinct members differ by at least `1/(knK)` (class `A`; one more `1/k`
/// for `convex`) in some coefficient `a_k`, so the coefficient lower bound
/// gives metric distance at least `min_k (λ^k r_k^k / 2) / (n² K)`
/// (respectively `/ (n³ K)`).
pub fn packing_certificate_in(
    family: PackingFamily,
    n: u32,
    k: u64,
    cfg: &MetricConfig,
) -> Result<PackingCertificate> {
    check_n_k(n, k)?;
    cfg.validate()?;
    let count = (k as u128)
        .checked_pow(n - 1)
        .ok_or(Error::CountOverflow { n, k })?;
    let mut min_w = f64::INFINITY;
    for deg in 2..=n {
        let w = cfg.lambda_j(deg) * cfg.r_j(deg).powi(deg as i32) / 2.0;
        if w < min_w {
            min_w = w;
        }
    }
    let n_f = f64::from(n);
    let denom = match family {
        PackingFamily::ClassA => n_f * n_f * (k as f64),
        PackingFamily::Convex => n_f * n_f * n_f * (k as f64),
    };
    let separation_lo = min_w / denom;
    if separation_lo <= 0.0 || separation_lo.is_nan() {
        return Err(Error::NonFinite("packing separation underflowed".into()));
    }
    Ok(PackingCertificate {
        family,
        n,
        k,
        count,
        separation_lo,
        delta: separation_lo / 3.0,
    })
}

/// Lazy enumeration of all `K^(n-1)` class-`A` members in lexicographic
/// index order (`t = (1,...,1)` first, last coordinate fastest).
pub fn packing_members(n: u32, k: u64) -> Result<MemberIter> {
    packing_members_in(PackingFamily::ClassA, n, k)
}

/// Lazy member enumeration for the chosen family.
pub fn packing_members_in(family: PackingFamily, n: u32, k: u64) -> Result<MemberIter> {
    check_n_k(n, k)?;
    Ok(MemberIter {
        family,
        n,
        k,
        t: vec![1; (n - 1) as usize],
        done: false,
    })
}

/// Iterator over packing members; see [`packing_members`].
pub struct MemberIter {
    family: PackingFamily,
    n: u32,
    k: u64,
    t: Vec<u64>,
    done: bool,
}

impl Iterator for MemberIter {
    type Item = TaylorPoly;

    fn next(&mut self) -> Option<TaylorPoly> {
        if self.done {
            return None;
        }
        let member = packing_member_in(self.family, self.n, self.k, &self.t)
            .expect("iterator indices are in range by construction");
        // Odometer increment, last coordinate fastest.
        let mut pos = self.t.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            if self.t[pos] < self.k {
                self.t[pos] += 1;
                for later in &mut self.t[pos + 1..] {
                    *later = 1;
                }
                break;
            }
        }
        Some(member)
    }
}
