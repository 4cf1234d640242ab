use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Samples per independent generator stream.
pub const CHUNK: u64 = 1 << 14;

/// Number of `n` isotropic directions in `R^dim` with `⟨normal, u⟩ ≥ 0` for
/// every normal. Sample `i` is drawn from stream `i / CHUNK` of a ChaCha
/// generator keyed by `seed`, so the count does not depend on thread count.
pub fn hits(normals: &[Vec<f64>], dim: usize, n: u64, seed: u64) -> u64 {
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let len = CHUNK.min(n - c * CHUNK);
            let mut u = vec![0.0f64; dim];
            let mut count = 0u64;
            for _ in 0..len {
                for x in u.iter_mut() {
                    *x = StandardNormal.sample(&mut rng);
                }
                if normals
                    .iter()
                    .all(|nv| nv.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() >= 0.0)
                {
                    count += 1;
                }
            }
            count
        })
        .sum()
}

/// Estimate and its 3σ bound. The variance uses the add-one estimate
/// `(hits + 1) / (n + 2)` so that no or all hits still give a nonzero bound.
pub fn estimate(hits: u64, n: u64) -> (f64, f64) {
    let p = hits as f64 / n as f64;
    let q = (hits as f64 + 1.0) / (n as f64 + 2.0);
    (p, 3.0 * (q * (1.0 - q) / n as f64).sqrt())
}
