//! Shared generators for the integration suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sio_coherence::{random_density, random_permutation, split_seed, DensityMatrix, DEFAULT_TOL};

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Random state with dimension cycling over 2..=6 and rank cycling over
/// 1..=d, seeded from (tag, index).
pub fn cycled_state(tag: u64, index: u64) -> DensityMatrix {
    let dim = 2 + (index as usize % 5);
    let rank = 1 + ((index as usize / 5) % dim);
    random_density(dim, rank, split_seed(tag, index))
}

/// Direct sum of Ginibre blocks with random weights, scrambled by a random
/// permutation; indices not covered by any block stay exactly zero.
pub fn scrambled_direct_sum(
    total: usize,
    blocks: &[(usize, usize)],
    seed: u64,
) -> DensityMatrix {
    let placed: usize = blocks.iter().map(|b| b.0).sum();
    assert!(placed <= total);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..blocks.len())
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let norm: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / norm).collect();
    let positions = random_permutation(total, &mut rng);

    let mut entries = DMatrix::<Complex64>::zeros(total, total);
    let mut offset = 0;
    for (b, &(dim, rank)) in blocks.iter().enumerate() {
        let block = random_density(dim, rank, split_seed(seed, 100 + b as u64));
        let w = Complex64::new(weights[b], 0.0);
        for i in 0..dim {
            for j in 0..dim {
                entries[(positions[offset + i], positions[offset + j])] =
                    w * block.entries()[(i, j)];
            }
        }
        offset += dim;
    }
    DensityMatrix::new(entries, DEFAULT_TOL).expect("weighted direct sum is a valid state")
}
