//! Pure states and density operators on labelled tensor-product spaces.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::matrix::{hermitian_spectrum, Complex64, ComplexMatrix};
use super::{DENSITY_TOL, UNIT_NORM_TOL};
use crate::error::{Error, Result};

/// Unit vector on a tensor product of factors with dimensions `dims`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    dims: Vec<usize>,
}

impl PureState {
    /// Requires `prod(dims) == amplitudes.len()` and unit norm within
    /// [`UNIT_NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || total != amplitudes.len() {
            return Err(Error::FactorMismatch {
                dim: amplitudes.len(),
                dims,
            });
        }
        let norm = vec_norm(&amplitudes);
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::InvalidState {
                reason: format!("amplitude norm {norm} is not 1"),
            });
        }
        Ok(PureState { amplitudes, dims })
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(dims: &[usize], index: usize) -> Self {
        let total: usize = dims.iter().product();
        assert!(index < total, "basis index out of range");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); total];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        PureState {
            amplitudes,
            dims: dims.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Rank-one projector `|psi><psi|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "states live on different spaces");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PureState", 2)?;
        let pairs: Vec<[f64; 2]> = self.amplitudes.iter().map(|c| [c.re, c.im]).collect();
        st.serialize_field("amplitudes", &pairs)?;
        st.serialize_field("dims", &self.dims)?;
        st.end()
    }
}

pub(crate) fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Positive unit-trace Hermitian operator on a labelled tensor product.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    /// Requires a Hermitian matrix with eigenvalues `>= -`[`DENSITY_TOL`] and
    /// trace within [`DENSITY_TOL`] of 1.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || total != matrix.dim() {
            return Err(Error::FactorMismatch {
                dim: matrix.dim(),
                dims,
            });
        }
        let spectrum = hermitian_spectrum(&matrix)?;
        if let Some(min) = spectrum.last() {
            if *min < -DENSITY_TOL {
                return Err(Error::InvalidState {
                    reason: format!("least eigenvalue {min} is negative"),
                });
            }
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidState {
                reason: format!("trace {tr} is not 1"),
            });
        }
        Ok(DensityOperator { matrix, dims })
    }

    pub fn from_pure(state: &PureState) -> Self {
        DensityOperator {
            matrix: state.projector(),
            dims: state.dims().to_vec(),
        }
    }

    pub fn maximally_mixed(dims: &[usize]) -> Self {
        let total: usize = dims.iter().product();
        DensityOperator {
            matrix: ComplexMatrix::identity(total).scale_re(1.0 / total as f64),
            dims: dims.to_vec(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}
