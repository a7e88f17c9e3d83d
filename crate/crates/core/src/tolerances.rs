//! Frozen numeric tolerances and reference values.
//!
//! Everything here was fixed once from reference evaluations at the
//! default metric configuration (λ = 1/2, α = 1, 60 series terms, 4096
//! circle samples) and is deliberately not derived at runtime: tests and
//! verification suites compare fresh computations against these frozen
//! values, so a regression in the underlying arithmetic shows up as a
//! band violation rather than silently shifting the baseline.
//!
//! Band constants are intervals `(min, max)`; a computed statistic must
//! land inside. Slack constants absorb floating-point noise only — they
//! are orders of magnitude below every quantity they guard.

/// Additive guard on the cheap bracket's upper endpoint, covering the
/// rounding gap between a sampled circle maximum and the coefficient-sum
/// majorant for moderate degrees. See `metric::metric_quick_bracket`.
pub const QUICK_BRACKET_GUARD: f64 = 1e-12;

/// Membership tolerance used when validating quantizer inputs against the
/// bounded-coefficient class.
pub const QUANTIZE_MEMBER_TOL: f64 = 1e-9;

/// Floating-point slack for inequalities between independently certified
/// quantities (e.g. a lower bound from one route against an upper bound
/// from another).
pub const CERT_SLACK: f64 = 1e-9;

/// Slack for identities that hold exactly up to rounding.
pub const TIGHT_SLACK: f64 = 1e-12;

/// Degrees at which truncation-error decay rates are measured.
pub const RATE_NS: [u32; 5] = [25, 50, 100, 200, 400];

/// Band for the truncation decay rate `-ln T(n) / sqrt(n)` over
/// [`RATE_NS`]. The rate climbs slowly toward its limit `2·sqrt(ln 2)`
/// ≈ 1.665; this band brackets the desk-scale range.
pub const TRUNC_RATE_BAND: (f64, f64) = (0.43, 1.12);

/// Band for the sharpness-floor decay rate `-ln S(n) / sqrt(n)` over
/// [`RATE_NS`]. Same `2·sqrt(ln 2)` limit, approached from the other
/// side.
pub const SHARP_RATE_BAND: (f64, f64) = (1.22, 1.67);

/// Widened truncation band sharing its upper edge with
/// [`SHARP_RATE_BAND`]: the two-sided sandwich check needs bands that
/// overlap at the common limit.
pub const SANDWICH_TRUNC_BAND: (f64, f64) = (0.43, 1.67);

/// Relative tolerance for the lower-curve ratio
/// `log N / (n² log(1/δ))` against its analytic limit.
pub const LOWER_CURVE_REL_TOL: f64 = 0.20;

/// Upper limit for `log N(δ) / log³(1/δ)` along the net upper curve over
/// degrees 20..=200 (reference maximum ≈ 219.7 at n = 20).
pub const UPPER_CURVE_RATIO_MAX: f64 = 230.0;

/// Reference net certificate at degree 10: grid parameter,
/// certified radius, and log cardinality.
pub const NET_REF_N10_K: u128 = 272;
/// See [`NET_REF_N10_K`].
pub const NET_REF_N10_RADIUS: f64 = 0.7362263782764416;
/// See [`NET_REF_N10_K`].
pub const NET_REF_N10_LOG_COUNT: f64 = 126.01571589326488;

/// Acceptance band for the empirical box dimension of the
/// `{z + a·z² : |a| <= 1/2}` slice (true value 2).
pub const DIMENSION_BAND: (f64, f64) = (1.7, 2.3);

/// Default δ ladder for slice estimation runs.
pub const DELTA_LADDER: [f64; 3] = [0.05, 0.02, 0.01];
