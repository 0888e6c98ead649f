//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction and numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("invalid norm order {value}: must be a real number >= 1")]
    InvalidNormOrder { value: f64 },

    #[error("factor dimensions {dims:?} do not multiply to matrix dimension {dim}")]
    FactorMismatch { dim: usize, dims: Vec<usize> },

    #[error("invalid mixing parameter q = {q}: must lie in [0, 1]")]
    InvalidMixing { q: f64 },

    #[error("not a valid state: {reason}")]
    InvalidState { reason: String },

    #[error("subset expansion over {n} factors exceeds the cap of {cap}")]
    ExpansionCapExceeded { n: usize, cap: usize },

    #[error("multi-index space of size {required} exceeds the cap of {cap}")]
    MultiIndexCapExceeded { required: u128, cap: u64 },

    #[error("zero operator where a nonzero operator is required")]
    ZeroInput,

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
