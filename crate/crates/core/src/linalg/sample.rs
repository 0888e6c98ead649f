//! Seeded random sampling of states and Hermitian matrices.
//!
//! Everything here routes through a caller-supplied RNG (or a ChaCha8 stream
//! derived from an explicit seed), keeping all experiments reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{Complex64, ComplexMatrix};
use super::state::{vec_norm, PureState};

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-distributed unit vector in dimension `d`: independent complex
/// Gaussian entries, normalized.
pub fn sample_unit_vector_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    assert!(d >= 1, "dimension must be positive");
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| gaussian_complex(rng)).collect();
        let norm = vec_norm(&v);
        if norm > 1e-12 {
            return v.iter().map(|c| c / norm).collect();
        }
    }
}

/// Haar-random pure state on a single factor of dimension `d`.
pub fn sample_haar_state_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState {
    PureState::new(sample_unit_vector_with(d, rng), vec![d]).expect("normalized sample")
}

/// Haar-random pure state from a fresh ChaCha8 stream seeded with `seed`.
pub fn sample_haar_state(d: usize, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_haar_state_with(d, &mut rng)
}

/// Gaussian Hermitian matrix `(G + G^*) / 2` with standard complex Gaussian
/// entries in `G`.
pub fn sample_hermitian_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, |_, _| gaussian_complex(rng));
    g.add(&g.adjoint()).scale_re(0.5)
}
