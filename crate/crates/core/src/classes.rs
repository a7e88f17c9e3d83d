//! Function-class membership predicates, the Koebe polynomial, and a
//! numerical injectivity falsifier.
//!
//! Four coefficient-defined classes are supported:
//!
//! * `A` — normalized `a_1 = 1` with `Σ_{k>=2} k |a_k| <= 1`; a sufficient
//!   condition for univalence on the disk.
//! * `B` (de Branges) — `|a_k| <= k` for all `k`; contains every
//!   normalized univalent function.
//! * `B` (Littlewood) — the weaker classical bound `|a_k| <= e·k`.
//! * `convex` — normalized with `Σ_{k>=2} k² |a_k| <= 1`; sufficient for
//!   convex image.
//!
//! Univalence itself is not decidable from finitely many coefficients, so
//! there is no predicate for it: callers get the sufficient test plus
//! [`injectivity_falsifier`], a grid search for approximate injectivity
//! counterexamples.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TaylorPoly;

/// Identifier of a coefficient-defined function class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassId {
    /// `a_1 = 1`, `Σ_{k>=2} k |a_k| <= 1`.
    #[serde(rename = "A")]
    ClassA,
    /// `|a_k| <= k` (de Branges bound).
    #[serde(rename = "B")]
    ClassBDeBranges,
    /// `|a_k| <= e·k` (Littlewood bound).
    #[serde(rename = "B-littlewood")]
    ClassBLittlewood,
    /// `a_1 = 1`, `Σ_{k>=2} k² |a_k| <= 1` (convexity-sufficient).
    #[serde(rename = "convex")]
    ConvexSufficient,
}

impl ClassId {
    /// The four classes in canonical order.
    pub const ALL: [ClassId; 4] = [
        ClassId::ClassA,
        ClassId::ClassBDeBranges,
        ClassId::ClassBLittlewood,
        ClassId::ConvexSufficient,
    ];

    /// Name used by the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            ClassId::ClassA => "A",
            ClassId::ClassBDeBranges => "B",
            ClassId::ClassBLittlewood => "B-littlewood",
            ClassId::ConvexSufficient => "convex",
        }
    }
}

impl std::str::FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(ClassId::ClassA),
            "B" => Ok(ClassId::ClassBDeBranges),
            "B-littlewood" => Ok(ClassId::ClassBLittlewood),
            "convex" => Ok(ClassId::ConvexSufficient),
            other => Err(Error::InvalidInput(format!(
                "unknown class \"{other}\" (expected A, B, B-littlewood, or convex)"
            ))),
        }
    }
}

impl std::fmt::Display for ClassId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !tol.is_finite() || tol < 0.0 {
        return Err(Error::InvalidInput(format!(
            "membership tolerance must be a finite nonnegative real, got {tol}"
        )));
    }
    Ok(())
}

/// Tests class membership within additive tolerance `tol`.
///
/// Where the class requires normalization, `|a_1 - 1| <= tol` is checked;
/// sum constraints are checked as `sum <= bound + tol`. The default
/// tolerance for exact members is 0 — sums of finitely many moduli are
/// computed directly in working precision.
pub fn is_member(p: &TaylorPoly, c: ClassId, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    let normalized = || (p.coeff(1) - Complex64::new(1.0, 0.0)).norm() <= tol;
    Ok(match c {
        ClassId::ClassA => {
            let sum: f64 = (2..=p.degree()).map(|k| k as f64 * p.coeff(k).norm()).sum();
            normalized() && sum <= 1.0 + tol
        }
        ClassId::ClassBDeBranges => (1..=p.degree()).all(|k| p.coeff(k).norm() <= k as f64 + tol),
        ClassId::ClassBLittlewood => {
            (1..=p.degree()).all(|k| p.coeff(k).norm() <= std::f64::consts::E * k as f64 + tol)
        }
        ClassId::ConvexSufficient => {
            let sum: f64 = (2..=p.degree())
                .map(|k| (k * k) as f64 * p.coeff(k).norm())
                .sum();
            normalized() && sum <= 1.0 + tol
        }
    })
}

/// Sufficient univalence test: exactly class-`A` membership.
///
/// True guarantees `p` is injective on the open disk; false proves
/// nothing (the Koebe polynomials fail the test yet are injective).
pub fn schlicht_sufficient(p: &TaylorPoly, tol: f64) -> Result<bool> {
    is_member(p, ClassId::ClassA, tol)
}

/// The degree-`n` Koebe polynomial `Σ_{k=1..n} k z^k`, the truncation of
/// `z/(1-z)² `. It meets the de Branges bound with equality in every
/// coefficient, which makes it the canonical extremal input.
pub fn koebe(n: u32) -> Result<TaylorPoly> {
    if n < 1 {
        return Err(Error::InvalidInput("koebe degree must be >= 1".into()));
    }
    TaylorPoly::new((1..=n).map(|k| Complex64::new(f64::from(k), 0.0)).collect())
}

/// Searches a `g × g` polar grid in `{|z| <= 0.995}` for an approximate
/// injectivity violation: a pair of distinct grid points `z ≠ w` with
/// `|p(z) - p(w)| <= tol`.
///
/// Returns the first such pair in lexicographic grid order (radius-major,
/// then angle), or `None`. A returned pair witnesses that `p` is at best
/// barely injective near those points; an empty result proves nothing.
/// The grid stops at radius 0.995 because class-`B` members blow up like
/// `(1-r)^{-2}` at the boundary.
pub fn injectivity_falsifier(
    p: &TaylorPoly,
    g: u32,
    tol: f64,
) -> Result<Option<(Complex64, Complex64)>> {
    check_tol(tol)?;
    if g < 4 {
        return Err(Error::InvalidInput(format!(
            "falsifier grid needs g >= 4, got {g}"
        )));
    }
    let g_us = g as usize;
    let mut points = Vec::with_capacity(g_us * g_us);
    let mut values = Vec::with_capacity(g_us * g_us);
    for i in 1..=g {
        let rho = 0.995 * f64::from(i) / f64::from(g);
        for m in 0..g {
            let theta = std::f64::consts::TAU * f64::from(m) / f64::from(g);
            let z = Complex64::from_polar(rho, theta);
            points.push(z);
            values.push(p.eval_unchecked(z));
        }
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            debug_assert!(points[i] != points[j]);
            if (values[i] - values[j]).norm() <= tol {
                return Ok(Some((points[i], points[j])));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn poly(coeffs: &[f64]) -> TaylorPoly {
        TaylorPoly::from_real(coeffs).unwrap()
    }

    #[test]
    fn identity_is_in_all_classes() {
        let z = poly(&[1.0]);
        for c in ClassId::ALL {
            assert!(is_member(&z, c, 0.0).unwrap(), "{c}");
        }
    }

    #[test]
    fn koebe_memberships() {
        for n in [2u32, 5, 20] {
            let k = koebe(n).unwrap();
            assert!(is_member(&k, ClassId::ClassBDeBranges, 0.0).unwrap());
            assert!(is_member(&k, ClassId::ClassBLittlewood, 0.0).unwrap());
            assert!(!is_member(&k, ClassId::ClassA, 0.0).unwrap());
            assert!(!is_member(&k, ClassId::ConvexSufficient, 0.0).unwrap());
        }
    }

    #[test]
    fn convex_example_is_in_both_sufficient_classes() {
        let p = poly(&[1.0, 0.125]);
        assert!(is_member(&p, ClassId::ConvexSufficient, 0.0).unwrap());
        assert!(is_member(&p, ClassId::ClassA, 0.0).unwrap());
    }

    #[test]
    fn schlicht_sufficient_boundary() {
        assert!(schlicht_sufficient(&poly(&[1.0, 0.5]), 0.0).unwrap());
        assert!(!schlicht_sufficient(&poly(&[1.0, 0.6]), 0.0).unwrap());
        assert!(!schlicht_sufficient(&koebe(5).unwrap(), 0.0).unwrap());
    }

    #[test]
    fn membership_tolerance_and_validation() {
        // a_1 off by 1e-13 only passes with a tolerance.
        let p = poly(&[1.0 + 1e-13, 0.5]);
        assert!(!is_member(&p, ClassId::ClassA, 0.0).unwrap());
        assert!(is_member(&p, ClassId::ClassA, 1e-12).unwrap());
        assert!(is_member(&p, ClassId::ClassA, f64::NAN).is_err());
        assert!(is_member(&p, ClassId::ClassA, -1.0).is_err());
    }

    #[test]
    fn koebe_coefficients_and_validation() {
        assert!(koebe(0).is_err());
        let k1 = koebe(1).unwrap();
        assert_eq!(k1.coeffs(), &[Complex64::new(1.0, 0.0)]);
        let k4 = koebe(4).unwrap();
        let want: Vec<Complex64> = (1..=4).map(|k| Complex64::new(k as f64, 0.0)).collect();
        assert_eq!(k4.coeffs(), want.as_slice());
        // de Branges bound met with equality in every coefficient.
        for (i, a) in k4.coeffs().iter().enumerate() {
            assert_eq!(a.norm(), (i + 1) as f64);
        }
    }

    #[test]
    fn koebe_eval_approaches_closed_form() {
        // z/(1-z)² at z = 1/2 equals 2; the degree-200 truncation misses
        // only Σ_{k>200} k 2^{-k}, which the exact tail formula bounds far
        // below the 1e-6 relative target.
        let z = Complex64::new(0.5, 0.0);
        let v = koebe(200).unwrap().eval(z).unwrap();
        let r: f64 = 0.5;
        let tail = r.powi(201) * (201.0 - 200.0 * r) / ((1.0 - r) * (1.0 - r));
        assert!(tail < 1e-6 * 2.0);
        assert!((v.re - 2.0).abs() <= tail + 1e-12);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn class_names_round_trip() {
        for c in ClassId::ALL {
            assert_eq!(ClassId::from_str(c.name()).unwrap(), c);
        }
        assert!(ClassId::from_str("S").is_err());
        assert!(ClassId::from_str("a").is_err());
    }

    #[test]
    fn falsifier_validation() {
        let p = poly(&[1.0]);
        assert!(injectivity_falsifier(&p, 3, 1e-9).is_err());
        assert!(injectivity_falsifier(&p, 64, -1.0).is_err());
    }

    #[test]
    fn falsifier_identity_finds_nothing() {
        let p = poly(&[1.0]);
        assert_eq!(injectivity_falsifier(&p, 64, 1e-9).unwrap(), None);
    }

    #[test]
    fn falsifier_square_finds_antipodal_pair() {
        // p(z) = z² identifies ±z; with g even the grid contains both, so
        // the first witness appears already at the innermost radius.
        let p = poly(&[0.0, 1.0]);
        let (z, w) = injectivity_falsifier(&p, 64, 1e-12).unwrap().unwrap();
        assert!((z + w).norm() < 1e-15, "expected an antipodal pair");
        let pz = p.eval(z).unwrap();
        let pw = p.eval(w).unwrap();
        assert!((pz - pw).norm() <= 1e-12);
        // Lexicographic order: first radius ring, first angle.
        assert!((z - Complex64::from_polar(0.995 / 64.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn falsifier_agrees_with_all_pairs_oracle() {
        // p(z) = z + 0.51 z² narrowly fails the sufficient condition and
        // is genuinely non-injective near z = -1/1.02. Compare against an
        // independent all-pairs scan at g = 64.
        let p = poly(&[1.0, 0.51]);
        let g = 64u32;
        let tol = 2e-4;

        let mut points = Vec::new();
        for i in 1..=g {
            let rho = 0.995 * f64::from(i) / f64::from(g);
            for m in 0..g {
                let theta = std::f64::consts::TAU * f64::from(m) / f64::from(g);
                points.push(Complex64::from_polar(rho, theta));
            }
        }
        let vals: Vec<Complex64> = points.iter().map(|&z| p.eval(z).unwrap()).collect();
        let mut oracle = None;
        'outer: for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if (vals[i] - vals[j]).norm() <= tol {
                    oracle = Some((points[i], points[j]));
                    break 'outer;
                }
            }
        }

        let got = injectivity_falsifier(&p, g, tol).unwrap();
        assert_eq!(got, oracle);
        assert!(
            got.is_some(),
            "expected a witness for the non-injective input"
        );
    }
}
