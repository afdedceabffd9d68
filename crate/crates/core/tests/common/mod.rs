#![allow(dead_code)]

use qtm_core::numerics::{gram_schmidt, Complex64, DenseMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded Haar-like unitary: Gram–Schmidt of a matrix with uniform entries.
pub fn random_unitary(dim: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    let basis = gram_schmidt(&cols, 1e-8);
    assert_eq!(basis.len(), dim);
    let mut m = DenseMatrix::zeros(dim);
    for (c, col) in basis.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            m.set(r, c, *z);
        }
    }
    m
}
