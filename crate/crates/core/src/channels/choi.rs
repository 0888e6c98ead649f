//! Choi matrices: the channel applied to half of an unnormalized maximally
//! entangled pair.

use super::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_spectrum, partial_trace, Complex64, ComplexMatrix, SubsetMask,
};

/// Choi matrix `sum_ij Phi(E_ij) (x) E_ij` of a map on a `d`-dimensional
/// space (output factor first, unnormalized so the identity map gives a
/// rank-one matrix with top eigenvalue `d`).
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    matrix: ComplexMatrix,
    input_dim: usize,
}

impl ChoiMatrix {
    /// Builds the Choi matrix of an arbitrary linear map given by its action
    /// on matrix units. This deliberately accepts non-channels so that
    /// non-completely-positive maps can be probed as negative controls.
    pub fn from_action(
        d: usize,
        mut action: impl FnMut(&ComplexMatrix) -> Result<ComplexMatrix>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("zero-dimensional map".into()));
        }
        let mut matrix = ComplexMatrix::zeros(d * d);
        for a in 0..d {
            for b in 0..d {
                let mut unit = ComplexMatrix::zeros(d);
                unit.set(a, b, Complex64::new(1.0, 0.0));
                let out = action(&unit)?;
                if out.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: out.dim(),
                    });
                }
                for r in 0..d {
                    for c in 0..d {
                        matrix.set(r * d + a, c * d + b, out.get(r, c));
                    }
                }
            }
        }
        Ok(ChoiMatrix {
            matrix,
            input_dim: d,
        })
    }

    pub fn of_channel(channel: &QuantumChannel) -> Result<Self> {
        Self::from_action(channel.dim(), |m| channel.apply(m))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    /// Descending eigenvalues.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        hermitian_spectrum(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.spectrum()?.last().expect("nonempty spectrum"))
    }

    /// Complete positivity check: least eigenvalue above `-tol`.
    pub fn is_completely_positive(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }

    /// Largest deviation of the output partial trace from the identity;
    /// zero exactly when the underlying map is trace-preserving.
    pub fn output_trace_residual(&self) -> Result<f64> {
        let d = self.input_dim;
        let output = SubsetMask::singleton(&[d, d], 0)?;
        let reduced = partial_trace(&self.matrix, &output)?;
        Ok(reduced.sub(&ComplexMatrix::identity(d)).max_abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::QuantumChannel;

    #[test]
    fn choi_of_identity_map_is_entangled_projector() {
        let choi = ChoiMatrix::from_action(2, |m| Ok(m.clone())).unwrap();
        let spec = choi.spectrum().unwrap();
        assert!((spec[0] - 2.0).abs() < 1e-12);
        for &lam in &spec[1..] {
            assert!(lam.abs() < 1e-12);
        }
        assert!(choi.output_trace_residual().unwrap() < 1e-12);
    }

    #[test]
    fn choi_of_depolarizing_has_known_spectrum() {
        for &(d, q) in &[(2usize, 0.0), (2, 0.5), (3, 0.5), (3, 1.0)] {
            let ch = QuantumChannel::depolarizing(d, q).unwrap();
            let choi = ChoiMatrix::of_channel(&ch).unwrap();
            let spec = choi.spectrum().unwrap();
            let top = (1.0 - q) * d as f64 + q / d as f64;
            let rest = q / d as f64;
            assert!((spec[0] - top).abs() < 1e-12);
            for &lam in &spec[1..] {
                assert!((lam - rest).abs() < 1e-12);
            }
            assert!((choi.min_eigenvalue().unwrap() - rest).abs() < 1e-12);
            assert!(choi.output_trace_residual().unwrap() < 1e-12);
            assert!(choi.is_completely_positive(1e-9).unwrap());
        }
    }

    #[test]
    fn transpose_map_is_trace_preserving_but_not_cp() {
        let choi = ChoiMatrix::from_action(2, |m| Ok(m.transpose())).unwrap();
        assert!(choi.output_trace_residual().unwrap() < 1e-12);
        assert!((choi.min_eigenvalue().unwrap() + 1.0).abs() < 1e-12);
        assert!(!choi.is_completely_positive(1e-9).unwrap());
    }

    #[test]
    fn choi_spectrum_matches_kraus_gram_for_random_channel() {
        use crate::channels::sample_kraus_channel_with;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let ch = sample_kraus_channel_with(3, 4, &mut rng);
        let choi = ChoiMatrix::of_channel(&ch).unwrap();
        assert!(choi.min_eigenvalue().unwrap() > -1e-12);
        assert!(choi.output_trace_residual().unwrap() < 1e-12);
        // trace of the Choi matrix equals the input dimension for any
        // trace-preserving map
        assert!((choi.matrix().trace().re - 3.0).abs() < 1e-12);
    }
}
