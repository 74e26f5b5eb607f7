#![allow(dead_code)]

pub mod leech;

use gabor_lattice::Lattice;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random planar lattice of the given density whose basis is not too
/// skewed (Hadamard ratio at least 0.3).
pub fn random_lattice(rng: &mut ChaCha8Rng, density: f64) -> Lattice {
    loop {
        let e: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let det = (e[0] * e[3] - e[1] * e[2]).abs();
        let n1 = (e[0] * e[0] + e[2] * e[2]).sqrt();
        let n2 = (e[1] * e[1] + e[3] * e[3]).sqrt();
        if det > 0.3 * n1 * n2 {
            return Lattice::from_row_major(2, &e).unwrap().scaled_to_density(density).unwrap();
        }
    }
}
