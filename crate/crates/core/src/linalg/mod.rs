//! Dense complex linear algebra kernel: matrices over `Complex<f64>`, tensor
//! products and partial traces over labelled factors, Hermitian
//! eigendecomposition, Schatten p-norms, and seeded random sampling.
//!
//! Matrices are square, row-major, and indexed by flattening tensor factors
//! with the leftmost factor slowest (so `|i> (x) |j>` sits at `i * d2 + j`).

mod mask;
mod matrix;
mod norm;
mod sample;
mod state;

pub use mask::SubsetMask;
pub use matrix::{
    embed_with_identity, hermitian_eig, hermitian_spectrum, partial_trace, schatten_norm,
    schatten_norm_of_values, tensor_product, Complex64, ComplexMatrix, HermitianEig,
};
pub use norm::NormOrder;
pub use sample::{
    sample_haar_state, sample_haar_state_with, sample_hermitian_with, sample_unit_vector_with,
};
pub use state::{DensityOperator, PureState};
pub(crate) use state::vec_norm;

/// Relative tolerance for the Hermitian check: a matrix is accepted as
/// Hermitian when `max |M[i][j] - conj(M[j][i])| <= HERMITIAN_REL_TOL * max |M|`.
pub const HERMITIAN_REL_TOL: f64 = 1e-12;

/// Relative tolerance for eigendecomposition residuals
/// (`U diag(v) U^*` must match the input within this times `max |M|`).
pub const EIG_RECONSTRUCT_REL_TOL: f64 = 1e-10;

/// Absolute tolerance on unit norms of state vectors.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Tolerances for density operators: least eigenvalue and trace deviation.
pub const DENSITY_TOL: f64 = 1e-10;

pub(crate) mod serde_c64 {
    //! Serialize complex scalars and vectors as `[re, im]` pairs.

    use super::Complex64;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&c.re)?;
        seq.serialize_element(&c.im)?;
        seq.end()
    }
}
