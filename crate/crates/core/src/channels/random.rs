//! Random trace-preserving channels for search experiments.

use rand::Rng;

use super::QuantumChannel;
use crate::linalg::{Complex64, ComplexMatrix};

/// Samples a random channel on dimension `d` with `kraus_count` operators:
/// the columns of a Gaussian `(d * kraus_count) x d` matrix are
/// orthonormalized and sliced into `d x d` blocks, so the stacked blocks form
/// an isometry and the Kraus sum condition holds by construction.
pub fn sample_kraus_channel_with<R: Rng + ?Sized>(
    d: usize,
    kraus_count: usize,
    rng: &mut R,
) -> QuantumChannel {
    assert!(d >= 1 && kraus_count >= 1, "need a nonempty isometry");
    let rows = d * kraus_count;
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while columns.len() < d {
        let mut v: Vec<Complex64> = (0..rows)
            .map(|_| {
                Complex64::new(
                    rng.sample(rand_distr::StandardNormal),
                    rng.sample(rand_distr::StandardNormal),
                )
            })
            .collect();
        // modified Gram-Schmidt, run twice for numerical robustness
        for _ in 0..2 {
            for q in &columns {
                let overlap: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= overlap * qi;
                }
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue; // essentially impossible; resample this column
        }
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        columns.push(v);
    }
    let operators = (0..kraus_count)
        .map(|k| ComplexMatrix::from_fn(d, |i, j| columns[j][k * d + i]))
        .collect();
    QuantumChannel::kraus(operators).expect("well-shaped Kraus list")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_channel_satisfies_kraus_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for &(d, k) in &[(2usize, 1usize), (2, 4), (3, 5), (4, 2)] {
            let ch = sample_kraus_channel_with(d, k, &mut rng);
            let ops = ch.kraus_operators().unwrap();
            assert_eq!(ops.len(), k);
            let mut sum = ComplexMatrix::zeros(d);
            for a in &ops {
                sum = sum.add(&a.adjoint().matmul(a));
            }
            assert!(sum.sub(&ComplexMatrix::identity(d)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let ops1 = sample_kraus_channel_with(3, 3, &mut ChaCha8Rng::seed_from_u64(5))
            .kraus_operators()
            .unwrap();
        let ops2 = sample_kraus_channel_with(3, 3, &mut ChaCha8Rng::seed_from_u64(5))
            .kraus_operators()
            .unwrap();
        for (a, b) in ops1.iter().zip(&ops2) {
            assert_eq!(a.entries(), b.entries());
        }
    }
}
