//! Numerical toolkit for finite-dimensional quantum channels: Schatten norms,
//! maximal output purity, and multiplicativity checks for tensor products of
//! depolarizing channels.
//!
//! The crate is layered bottom-up:
//!
//! - [`linalg`] — dense complex matrices, tensor products, partial traces,
//!   Hermitian spectra, Schatten norms, and seeded random sampling;
//! - [`channels`] — channel representations (Kraus lists, depolarizing
//!   parameters, tensor products), conditional expectations onto subsets of
//!   tensor factors, Choi matrices, and validity checks;
//! - [`purity`] — closed forms and a fixed-point optimizer for the maximal
//!   output p-norm, 1->p norm ratios, and multiplicativity comparisons;
//! - [`lemma`] — a combinatorial trace bound for operators that act as the
//!   identity on a subset of factors, together with the cyclic pair
//!   permutation identity that drives it.
//!
//! All randomized routines take explicit seeds (ChaCha8) so every result in
//! this crate is reproducible bit-for-bit.

pub mod channels;
pub mod error;
pub mod lemma;
pub mod linalg;
pub mod purity;

pub use error::{Error, Result};
