//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by validation and by certificate construction.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is outside its documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A computation produced a NaN or infinity where a finite value is required.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// Malformed JSON input (configuration or coefficient file).
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    /// No admissible packing modulus 1/q exists below `lambda` within the
    /// searched denominator range.
    #[error("no admissible rho with denominator <= {max_denominator} below lambda = {lambda}")]
    RhoSearchFailed { lambda: f64, max_denominator: u64 },

    /// The truncation tail bound underflowed to zero, so no finite net
    /// certificate can be derived from it.
    #[error("truncation tail bound underflows at n = {n}; certificate unavailable")]
    TailUnderflow { n: u32 },

    /// The packing cardinality K^(n-1) does not fit in a u128.
    #[error("packing count K^(n-1) overflows at n = {n}, K = {k}")]
    CountOverflow { n: u32, k: u64 },

    /// Sampling is only implemented for the classes with product structure.
    #[error("sampling is not supported for class {0}")]
    UnsupportedClass(String),

    /// A regression was requested on too few usable ladder points.
    #[error("degenerate ladder: need at least {needed} usable points, got {got}")]
    DegenerateLadder { needed: usize, got: usize },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
