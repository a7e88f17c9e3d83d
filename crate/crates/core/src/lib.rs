//! Certified metric-entropy bounds for holomorphic function classes on
//! the unit disk.
//!
//! Functions are represented by their Taylor polynomials at 0 and
//! compared in a weighted sup-metric over an exhausting sequence of
//! circles: `d(f, g) = Σ_j λ^j · min(1, max_{|z| = r_j} |f - g|)` with
//! `r_j = 1 - (j+1)^{-α}`. Every numerical comparison in this crate goes
//! through two-sided enclosures of that metric, so inequalities between
//! derived quantities are certified up to explicitly stated slack, never
//! trusted to a single floating-point estimate.
//!
//! The crate is organized bottom-up:
//!
//! - [`series`]: Taylor polynomials, evaluation, and certified maximum
//!   modulus on circles.
//! - [`metric`]: the metric enclosure, coefficient-gap lower bounds, and
//!   truncation tails.
//! - [`classes`]: coefficient-defined function classes and membership
//!   tests.
//! - [`constructions`]: separated families, quantizer nets, the base
//!   ratio for count growth, and the resulting lower/upper count curves.
//! - [`estimator`]: greedy packing/covering statistics on sampled slices.
//! - [`verify`]: randomized cross-validation suites.
//! - [`tolerances`]: frozen reference values and slack constants.

pub mod classes;
pub mod constructions;
pub mod error;
pub mod estimator;
pub mod metric;
pub mod series;
pub mod tolerances;
pub mod verify;

pub use classes::ClassId;
pub use error::{Error, Result};
pub use metric::{metric_d, MetricConfig, TailMode};
pub use series::{BoundInterval, TaylorPoly};
