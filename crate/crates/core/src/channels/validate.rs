//! Channel validity checks: trace preservation and complete positivity.

use serde::Serialize;

use super::QuantumChannel;
use crate::error::Result;
use crate::linalg::{hermitian_spectrum, Complex64, ComplexMatrix};

/// Largest allowed operator-norm deviation of the Kraus sum from the
/// identity.
pub const TRACE_PRESERVATION_TOL: f64 = 1e-9;

/// Most negative allowed Choi eigenvalue.
pub const CP_TOL: f64 = 1e-9;

/// Outcome of [`validate`].
#[derive(Clone, Debug, Serialize)]
pub struct ValidityReport {
    pub channel: String,
    pub trace_residual: f64,
    pub min_choi_eigenvalue: f64,
    pub passes: bool,
    pub warnings: Vec<String>,
}

/// Spectral data of one leaf factor: eigenvalues of the Kraus sum
/// `sum A_k^* A_k` and of the Choi matrix (zeros included).
struct LeafSpectra {
    kraus_sum: Vec<f64>,
    choi: Vec<f64>,
}

fn leaf_spectra(leaf: &QuantumChannel) -> Result<LeafSpectra> {
    match leaf {
        QuantumChannel::Depolarizing { dim, q } => {
            // Both spectra are flat outside one eigenvalue, so they are
            // evaluated directly; unit tests pin them against the numeric
            // Kraus/Choi route on small dimensions.
            let d = *dim as f64;
            let id_weight_sq = 1.0 - q + q / (d * d);
            let weyl_weight_sq = q / (d * d);
            let sum = id_weight_sq + (d * d - 1.0) * weyl_weight_sq;
            let mut choi = vec![(1.0 - q) * d + q / d];
            choi.extend(std::iter::repeat_n(q / d, dim * dim - 1));
            Ok(LeafSpectra {
                kraus_sum: vec![sum; *dim],
                choi,
            })
        }
        QuantumChannel::Kraus { dim, operators } => {
            let mut sum = ComplexMatrix::zeros(*dim);
            for a in operators {
                sum = sum.add(&a.adjoint().matmul(a));
            }
            let kraus_sum = hermitian_spectrum(&sum)?;
            // The Choi matrix is the Gram matrix of the vectorized Kraus
            // operators plus zeros, so its spectrum comes from a small
            // k x k eigenproblem regardless of dimension.
            let k = operators.len();
            let gram = ComplexMatrix::from_fn(k, |r, c| {
                operators[r]
                    .entries()
                    .iter()
                    .zip(operators[c].entries())
                    .map(|(a, b)| a.conj() * b)
                    .sum::<Complex64>()
            });
            let mut choi = hermitian_spectrum(&gram)?;
            choi.extend(std::iter::repeat_n(0.0, (dim * dim).saturating_sub(k)));
            Ok(LeafSpectra { kraus_sum, choi })
        }
        QuantumChannel::Product { .. } => unreachable!("leaves are not products"),
    }
}

fn extrema(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Product range `[lo, hi]` of one value per factor, each drawn from that
/// factor's `[lo, hi]` interval (vertex enumeration, exact for products).
fn product_range(ranges: &[(f64, f64)]) -> (f64, f64) {
    let mut lo = 1.0f64;
    let mut hi = 1.0f64;
    for &(flo, fhi) in ranges {
        let cands = [lo * flo, lo * fhi, hi * flo, hi * fhi];
        lo = cands.iter().copied().fold(f64::INFINITY, f64::min);
        hi = cands.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    }
    (lo, hi)
}

/// Checks trace preservation and complete positivity.
///
/// For tensor products both checks combine per-factor spectra exactly
/// (spectra of tensor products are products of factor spectra), so large
/// product dimensions never require a full Choi eigendecomposition.
pub fn validate(channel: &QuantumChannel) -> Result<ValidityReport> {
    let leaves = channel.leaves();
    let mut warnings = Vec::new();
    let mut sum_ranges = Vec::with_capacity(leaves.len());
    let mut choi_ranges = Vec::with_capacity(leaves.len());
    for (i, leaf) in leaves.iter().enumerate() {
        if let QuantumChannel::Depolarizing { q, .. } = leaf {
            if *q == 0.0 || *q == 1.0 {
                warnings.push(format!(
                    "factor {i}: mixing parameter q = {q} sits on the boundary of [0, 1]"
                ));
            }
        }
        let spectra = leaf_spectra(leaf)?;
        sum_ranges.push(extrema(&spectra.kraus_sum));
        choi_ranges.push(extrema(&spectra.choi));
    }
    let (sum_lo, sum_hi) = product_range(&sum_ranges);
    let trace_residual = (sum_lo - 1.0).abs().max((sum_hi - 1.0).abs());
    let (choi_lo, _) = product_range(&choi_ranges);
    let passes = trace_residual <= TRACE_PRESERVATION_TOL && choi_lo >= -CP_TOL;
    Ok(ValidityReport {
        channel: channel.descriptor(),
        trace_residual,
        min_choi_eigenvalue: choi_lo,
        passes,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{kraus_of_depolarizing, sample_kraus_channel_with, ChoiMatrix};
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn accepts_depolarizing_and_products() {
        let single = QuantumChannel::depolarizing(3, 0.5).unwrap();
        let report = validate(&single).unwrap();
        assert!(report.passes, "{report:?}");
        assert!(report.trace_residual <= 1e-12);
        assert!((report.min_choi_eigenvalue - 0.5 / 3.0).abs() < 1e-12);

        let prod = QuantumChannel::product(vec![
            QuantumChannel::depolarizing(2, 0.3).unwrap(),
            QuantumChannel::depolarizing(3, 0.7).unwrap(),
        ])
        .unwrap();
        assert!(validate(&prod).unwrap().passes);
    }

    #[test]
    fn accepts_sampled_kraus_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let ch = sample_kraus_channel_with(3, 4, &mut rng);
        let report = validate(&ch).unwrap();
        assert!(report.passes, "{report:?}");
        assert!(report.min_choi_eigenvalue >= -1e-12);
    }

    #[test]
    fn rejects_scaled_kraus_list() {
        let half = ComplexMatrix::identity(2).scale_re(0.5);
        let ch = QuantumChannel::kraus(vec![half]).unwrap();
        let report = validate(&ch).unwrap();
        assert!(!report.passes);
        assert!((report.trace_residual - 0.75).abs() < 1e-12);
        // still completely positive, just not trace-preserving
        assert!(report.min_choi_eigenvalue >= 0.0);
    }

    #[test]
    fn product_with_bad_factor_fails() {
        let bad = QuantumChannel::kraus(vec![ComplexMatrix::identity(2).scale_re(0.9)]).unwrap();
        let prod = QuantumChannel::product(vec![
            QuantumChannel::depolarizing(2, 0.5).unwrap(),
            bad,
        ])
        .unwrap();
        assert!(!validate(&prod).unwrap().passes);
    }

    #[test]
    fn warns_on_boundary_mixing() {
        let edge = QuantumChannel::product(vec![
            QuantumChannel::depolarizing(2, 0.0).unwrap(),
            QuantumChannel::depolarizing(2, 1.0).unwrap(),
        ])
        .unwrap();
        let report = validate(&edge).unwrap();
        assert!(report.passes);
        assert_eq!(report.warnings.len(), 2);
    }

    #[test]
    fn closed_forms_match_numeric_route() {
        // Validate the depolarizing closed forms against the explicit
        // Kraus/Choi computation on small dimensions.
        for &(d, q) in &[(2usize, 0.3), (3, 0.5), (4, 1.0), (2, 0.0)] {
            let direct = validate(&QuantumChannel::depolarizing(d, q).unwrap()).unwrap();
            let as_kraus =
                QuantumChannel::kraus(kraus_of_depolarizing(d, q).unwrap()).unwrap();
            let numeric = validate(&as_kraus).unwrap();
            assert!((direct.trace_residual - numeric.trace_residual).abs() < 1e-12);
            assert!(
                (direct.min_choi_eigenvalue - numeric.min_choi_eigenvalue).abs() < 1e-12
            );
            let full_choi = ChoiMatrix::of_channel(&as_kraus).unwrap();
            assert!(
                (full_choi.min_eigenvalue().unwrap() - direct.min_choi_eigenvalue).abs()
                    < 1e-12
            );
        }
    }
}
