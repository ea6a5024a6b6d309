//! Uniform sampling inside a simplex (float path; statistics only).

use num::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CoverError;
use crate::geom::polytope::VPolytope;

/// Deterministic RNG for all stochastic paths, derived from a user seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in a simplex via sorted uniform spacings (flat Dirichlet
/// barycentric weights).
pub fn sample_uniform_simplex(
    simplex: &VPolytope<BigRational>,
    rng: &mut impl Rng,
) -> Result<Vec<f64>, CoverError> {
    let n = simplex.dim();
    if simplex.vertices().len() != n + 1 {
        return Err(CoverError::NotASimplex(format!(
            "{} vertices in dimension {}",
            simplex.vertices().len(),
            n
        )));
    }
    let verts: Vec<Vec<f64>> = simplex.vertices().iter().map(|v| v.to_f64_vec()).collect();
    let mut cuts: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut weights = Vec::with_capacity(n + 1);
    let mut prev = 0.0;
    for c in &cuts {
        weights.push(c - prev);
        prev = *c;
    }
    weights.push(1.0 - prev);
    let mut point = vec![0.0; n];
    for (w, v) in weights.iter().zip(&verts) {
        for (pi, vi) in point.iter_mut().zip(v) {
            *pi += w * vi;
        }
    }
    Ok(point)
}
