//! Shared input builders for the benchmark suite.

use std::sync::Arc;

use cogredient::matrix::random_symmetric_invertible;
use cogredient::{Matrix, RingContext};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn ring(spec: &str) -> Arc<RingContext> {
    RingContext::from_spec(spec).expect("benchmark ring spec is valid")
}

/// Deterministic symmetric invertible input of the given rank.
pub fn seeded_matrix(spec: &str, n: usize, seed: u64) -> Matrix {
    let ctx = ring(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_symmetric_invertible(&ctx, n, &mut rng)
}
