//! Randomized invariants for the certified primitives.
//!
//! Each property asserts a direction that the implementation guarantees
//! (certified inequalities bitwise or up to a stated slack), over random
//! polynomials and, where meaningful, random metric configurations. Case
//! counts are reduced for the properties that pay for full circle
//! sampling.

use num_complex::Complex64;
use proptest::prelude::*;

use disk_entropy::classes::{injectivity_falsifier, is_member, schlicht_sufficient};
use disk_entropy::constructions::{net_upper_point, quantize_to_net, truncate};
use disk_entropy::estimator::{greedy_cover, greedy_pack};
use disk_entropy::metric::{
    coeff_distance_lower, metric_quick_bracket, metric_tail_bound, truncation_tail_bound,
};
use disk_entropy::series::{coeff_sum_upper, l2_circle_lower, max_modulus_interval};
use disk_entropy::tolerances::CERT_SLACK;
use disk_entropy::{metric_d, ClassId, MetricConfig, TailMode, TaylorPoly};

/// Random polynomial of degree 1..=6 with coefficients in a box.
fn poly_strategy(max_c: f64) -> impl Strategy<Value = TaylorPoly> {
    prop::collection::vec((-max_c..max_c, -max_c..max_c), 1..=6).prop_map(|cs| {
        TaylorPoly::new(
            cs.into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
        .expect("finite coefficients")
    })
}

/// Normalized polynomial: `a_1 = 1`, later coefficients of modulus < 1.
fn normalized_strategy() -> impl Strategy<Value = TaylorPoly> {
    prop::collection::vec((-0.7..0.7, -0.7..0.7), 0..=5).prop_map(|cs| {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        coeffs.extend(cs.into_iter().map(|(re, im)| Complex64::new(re, im)));
        TaylorPoly::new(coeffs).expect("finite coefficients")
    })
}

/// Random well-formed metric configuration.
fn cfg_strategy() -> impl Strategy<Value = MetricConfig> {
    (0.2..0.8_f64, 0.5..2.0_f64, 10..60_u32, 4..8_u32).prop_map(|(lambda, alpha, terms, log_m)| {
        MetricConfig::new(lambda, alpha, terms, 1 << log_m).expect("ranges are valid")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn interval_endpoints_are_ordered(p in poly_strategy(2.0), r in 0.05..0.95_f64, m in 8..128_u32) {
        let b = max_modulus_interval(&p, r, m).unwrap();
        prop_assert!(b.lo <= b.hi);
        prop_assert!(b.lo >= 0.0);
    }

    #[test]
    fn sampled_maximum_below_coefficient_sum(p in poly_strategy(2.0), r in 0.05..0.95_f64, m in 8..128_u32) {
        // The sampled lower end cannot exceed the coefficient-sum bound;
        // the slack covers the rounding difference of the two routes.
        let b = max_modulus_interval(&p, r, m).unwrap();
        let csum = coeff_sum_upper(&p, r).unwrap();
        prop_assert!(b.lo <= csum + 1e-12, "lo = {}, csum = {}", b.lo, csum);
    }

    #[test]
    fn mean_square_below_upper_end(p in poly_strategy(2.0), q in poly_strategy(2.0), r in 0.05..0.95_f64) {
        let d = p.sub(&q);
        let b = max_modulus_interval(&d, r, 512).unwrap();
        let l2 = l2_circle_lower(&p, &q, r).unwrap();
        prop_assert!(l2 <= b.hi + 1e-12, "l2 = {}, hi = {}", l2, b.hi);
    }

    #[test]
    fn doubling_samples_tightens_the_interval(p in poly_strategy(2.0), r in 0.05..0.95_f64, m in 8..256_u32) {
        // The 2M-point sample set contains the M-point set (indices scale
        // exactly), so the maximum can only grow and the width shrinks
        // with the correction term.
        let coarse = max_modulus_interval(&p, r, m).unwrap();
        let fine = max_modulus_interval(&p, r, 2 * m).unwrap();
        prop_assert!(fine.lo >= coarse.lo);
        prop_assert!(fine.width() <= coarse.width());
        prop_assert!(fine.hi <= coarse.hi + 1e-12);
    }

    #[test]
    fn sampled_maximum_is_reproducible(p in poly_strategy(2.0), r in 0.05..0.95_f64, m in 8..64_u32) {
        // Re-deriving the sample maximum from the public evaluator must
        // reproduce the lower end bit for bit.
        let b = max_modulus_interval(&p, r, m).unwrap();
        let mut max = 0.0_f64;
        for j in 0..m {
            let theta = std::f64::consts::TAU * f64::from(j) / f64::from(m);
            let z = Complex64::from_polar(r, theta);
            let v = p.eval(z).unwrap().norm_sqr().sqrt();
            if v > max {
                max = v;
            }
        }
        prop_assert_eq!(max, b.lo);
    }

    #[test]
    fn quantizer_error_is_per_axis_bounded(
        cs in prop::collection::vec((-0.7..0.7_f64, -0.7..0.7_f64), 1..=6),
        k in 1..40_u64,
    ) {
        // Rounding each complex coefficient to the grid (k/K)·(Z x Z) moves
        // it by at most k/(sqrt(2)·K) per coefficient index k. Inputs are
        // scaled into the de Branges box |a_k| <= k the quantizer requires.
        let n = cs.len() as u32;
        let p = TaylorPoly::new(
            cs.into_iter()
                .enumerate()
                .map(|(i, (re, im))| Complex64::new(re, im) * (i + 1) as f64)
                .collect(),
        )
        .unwrap();
        let (q, errs) = quantize_to_net(&p, n, k).unwrap();
        prop_assert!(q.degree() <= n as usize);
        for (i, &e) in errs.iter().enumerate() {
            let bound = (i + 1) as f64 / (2.0_f64.sqrt() * k as f64);
            prop_assert!(e <= bound + 1e-12, "err {} exceeds {}", e, bound);
        }
    }

    #[test]
    fn truncation_drops_high_coefficients_only(p in poly_strategy(3.0), n in 1..8_u32) {
        let t = truncate(&p, n).unwrap();
        prop_assert!(t.degree() <= n as usize);
        for k in 1..=t.degree() {
            prop_assert_eq!(t.coeff(k), p.coeff(k));
        }
    }

    #[test]
    fn class_memberships_nest(p in poly_strategy(0.4)) {
        // Convex-sufficient implies class A; the de Branges box implies
        // the Littlewood box.
        let tol = 1e-12;
        if is_member(&p, ClassId::ConvexSufficient, tol).unwrap() {
            prop_assert!(is_member(&p, ClassId::ClassA, tol).unwrap());
        }
        if is_member(&p, ClassId::ClassBDeBranges, tol).unwrap() {
            prop_assert!(is_member(&p, ClassId::ClassBLittlewood, tol).unwrap());
        }
    }

    #[test]
    fn sufficient_schlicht_members_resist_falsification(c2 in -0.35..0.35_f64, c3 in -0.2..0.2_f64) {
        // Inputs passing the sufficient test are injective, so the grid
        // search must come back empty at any reasonable tolerance.
        let p = TaylorPoly::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(c2, 0.0),
            Complex64::new(c3, 0.0),
        ])
        .unwrap();
        if schlicht_sufficient(&p, 1e-12).unwrap() {
            prop_assert!(injectivity_falsifier(&p, 24, 1e-12).unwrap().is_none());
        }
    }

    #[test]
    fn net_certificate_count_formula_holds(n in 1..40_u32) {
        let cert = net_upper_point(n, &MetricConfig::default()).unwrap();
        let expect = 2.0 * f64::from(n) * ((2.0 * cert.k as f64) + 1.0).ln();
        prop_assert_eq!(cert.log_count, expect);
        prop_assert!(!cert.internal);
    }
}

proptest! {
    // Full metric evaluations: fewer cases, still across random configs.
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quick_bracket_encloses_the_metric(
        f in poly_strategy(1.5),
        g in poly_strategy(1.5),
        cfg in cfg_strategy(),
    ) {
        let d = metric_d(&f, &g, &cfg).unwrap();
        let (qlo, qhi) = metric_quick_bracket(&f, &g, &cfg).unwrap();
        prop_assert!(qlo <= d.lo, "qlo = {} above lo = {}", qlo, d.lo);
        prop_assert!(d.hi <= qhi, "hi = {} above qhi = {}", d.hi, qhi);
    }

    #[test]
    fn metric_is_symmetric_and_vanishes_on_the_diagonal(
        f in poly_strategy(1.5),
        g in poly_strategy(1.5),
        cfg in cfg_strategy(),
    ) {
        let fg = metric_d(&f, &g, &cfg).unwrap();
        let gf = metric_d(&g, &f, &cfg).unwrap();
        prop_assert_eq!(fg.lo, gf.lo);
        prop_assert_eq!(fg.hi, gf.hi);
        let ff = metric_d(&f, &f, &cfg).unwrap();
        prop_assert_eq!(ff.lo, 0.0);
        prop_assert!(ff.hi <= metric_tail_bound(&cfg) + 1e-15);
    }

    #[test]
    fn triangle_inequality_holds_certified(
        f in poly_strategy(1.0),
        g in poly_strategy(1.0),
        h in poly_strategy(1.0),
        cfg in cfg_strategy(),
    ) {
        let fh = metric_d(&f, &h, &cfg).unwrap();
        let fg = metric_d(&f, &g, &cfg).unwrap();
        let gh = metric_d(&g, &h, &cfg).unwrap();
        prop_assert!(
            fh.lo <= fg.hi + gh.hi + CERT_SLACK,
            "lo = {} exceeds {} + {}",
            fh.lo, fg.hi, gh.hi
        );
    }

    #[test]
    fn coefficient_gap_lower_bound_is_below_the_metric(
        f in normalized_strategy(),
        g in normalized_strategy(),
    ) {
        // Needs enough circle samples relative to the degree; the default
        // configuration has plenty for degree <= 6.
        let cfg = MetricConfig::default();
        let cdl = coeff_distance_lower(&f, &g, &cfg).unwrap();
        let d = metric_d(&f, &g, &cfg).unwrap();
        prop_assert!(cdl <= d.hi + 1e-12);
        prop_assert!(cdl <= d.lo + CERT_SLACK, "cdl = {} above lo = {}", cdl, d.lo);
    }

    #[test]
    fn truncation_tail_modes_are_ordered(n in 1..200_u32, cfg in cfg_strategy()) {
        let exact = truncation_tail_bound(n, &cfg, TailMode::Exact).unwrap();
        let paper = truncation_tail_bound(n, &cfg, TailMode::Paper).unwrap();
        prop_assert!(exact <= paper + 1e-15, "exact = {} above paper = {}", exact, paper);
        prop_assert!(exact > 0.0);
    }

    #[test]
    fn packing_at_double_radius_never_beats_covering(
        seeds in prop::collection::vec((-0.24..0.24_f64, -0.24..0.24_f64), 3..10),
        delta in 0.02..0.2_f64,
    ) {
        // pack(2δ) <= cover(δ): every kept pack point lands in some cover
        // ball, and two of them cannot share one (their certified lower
        // bound is 2δ, the ball's certified diameter at most 2δ). The
        // companion relation cover(δ) <= pack(δ) is only statistical for
        // certified intervals — a pair whose true distance straddles δ
        // inside its interval counts for neither side — so it is checked
        // on the frozen estimation datasets, not here.
        let pts: Vec<TaylorPoly> = seeds
            .into_iter()
            .map(|(re, im)| {
                TaylorPoly::new(vec![Complex64::new(1.0, 0.0), Complex64::new(re, im)]).unwrap()
            })
            .collect();
        let cfg = MetricConfig::default();
        let pack2 = greedy_pack(&pts, 2.0 * delta, &cfg).unwrap();
        let cover = greedy_cover(&pts, delta, &cfg).unwrap();
        prop_assert!(pack2 <= cover, "pack(2δ) = {} above cover(δ) = {}", pack2, cover);
    }
}
