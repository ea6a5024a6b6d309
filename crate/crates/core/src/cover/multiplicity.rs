//! Monte-Carlo multiplicity estimator: vol(K)·E[1/j] = det(Λ) on coverings.
//!
//! Sample points float-uniformly in the simplex, rationalize each sample
//! exactly, and count covering multiplicity with exact halfspace tests so no
//! sample is ever misclassified at a boundary.

use num::{BigInt, One, Zero};
use rayon::prelude::*;

use crate::error::CoverError;
use crate::geom::{difference_body, sample_uniform_simplex, seeded_rng, to_hrep, volume};
use crate::lattice::{lattice_points_in, Lattice};
use crate::cover::verify::CoveringCertificate;
use crate::scalar::Scalar;
use crate::RatVPolytope;

/// Estimator output; `estimated_det` should match det(Λ) within a few
/// standard errors on genuine coverings.
#[derive(Clone, Debug)]
pub struct MultiplicityEstimate {
    pub mean_inverse_multiplicity: f64,
    pub std_error: f64,
    pub samples: u64,
    pub estimated_det: f64,
}

/// Integer-cleared halfspace for fast exact containment of dyadic points:
/// `normal · p <= offset · den`. Machine-width arithmetic when all cleared
/// coefficients are small enough that i128 dot products cannot overflow;
/// big integers otherwise. Both branches are exact.
enum IntHalfspace {
    Narrow { normal: Vec<i128>, rhs: i128 },
    Wide { normal: Vec<BigInt>, offset: BigInt },
}

/// Coefficient bound keeping |Σ aᵢpᵢ| < 2^127 for |pᵢ| ≤ 2^62 and ≤ 8 terms.
const NARROW_LIMIT: i128 = 1 << 61;

impl IntHalfspace {
    fn new(normal: Vec<BigInt>, offset: BigInt, den: &BigInt) -> Self {
        let small: Option<Vec<i128>> = normal
            .iter()
            .map(|a| i128::try_from(a.clone()).ok().filter(|v| v.abs() < NARROW_LIMIT))
            .collect();
        let rhs = i128::try_from(&offset * den).ok();
        match (small, rhs) {
            (Some(normal), Some(rhs)) => IntHalfspace::Narrow { normal, rhs },
            _ => IntHalfspace::Wide { normal, offset },
        }
    }

    fn contains(&self, p: &[i64], den: &BigInt) -> bool {
        match self {
            IntHalfspace::Narrow { normal, rhs } => {
                let mut lhs: i128 = 0;
                for (a, &x) in normal.iter().zip(p) {
                    lhs += a * i128::from(x);
                }
                lhs <= *rhs
            }
            IntHalfspace::Wide { normal, offset } => {
                let mut lhs = BigInt::zero();
                for (a, &x) in normal.iter().zip(p) {
                    lhs += a * BigInt::from(x);
                }
                lhs <= offset * den
            }
        }
    }
}

const DYADIC_BITS: u32 = 58;

pub fn multiplicity_density_estimate(
    simplex: &RatVPolytope,
    lattice: &Lattice,
    certificate: &CoveringCertificate,
    samples: u64,
    seed: u64,
) -> Result<MultiplicityEstimate, CoverError> {
    if !certificate.verdict.is_covered() {
        return Err(CoverError::NotACovering(format!(
            "certificate verdict is {}",
            certificate.verdict.name()
        )));
    }
    assert!(samples > 0);
    let _n = simplex.dim();

    // Translates that can contain a point of K: u ∈ x − K ⊆ D(K).
    let dk = difference_body(simplex)?;
    let candidates = lattice_points_in(&to_hrep(&dk)?, lattice)?;
    let body_h = to_hrep(simplex)?;
    let translate_tests: Vec<Vec<IntHalfspace>> = candidates
        .iter()
        .map(|u| {
            body_h
                .translate(u)
                .halfspaces()
                .iter()
                .map(|h| {
                    // Clear denominators across normal and offset.
                    let mut lcm = h.offset.denom().clone();
                    for c in &h.normal.0 {
                        lcm = num::Integer::lcm(&lcm, c.denom());
                    }
                    let normal = h
                        .normal
                        .0
                        .iter()
                        .map(|c| c.numer() * (&lcm / c.denom()))
                        .collect();
                    let offset = h.offset.numer() * (&lcm / h.offset.denom());
                    IntHalfspace::new(normal, offset, &(BigInt::one() << DYADIC_BITS))
                })
                .collect()
        })
        .collect();

    let den = BigInt::one() << DYADIC_BITS;
    let scale = (1u64 << DYADIC_BITS) as f64;
    let mut rng = seeded_rng(seed);
    let mut raw_points: Vec<Vec<i64>> = Vec::with_capacity(samples as usize);
    for _ in 0..samples {
        let x = sample_uniform_simplex(simplex, &mut rng)?;
        raw_points.push(x.iter().map(|&c| (c * scale).round() as i64).collect());
    }

    let inverse_multiplicities: Vec<Result<f64, CoverError>> = raw_points
        .par_iter()
        .map(|p| {
            let j = translate_tests
                .iter()
                .filter(|t| t.iter().all(|h| h.contains(p, &den)))
                .count();
            if j == 0 {
                let approx: Vec<f64> = p.iter().map(|&c| c as f64 / scale).collect();
                return Err(CoverError::ZeroMultiplicity(approx));
            }
            Ok(1.0 / j as f64)
        })
        .collect();

    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for r in inverse_multiplicities {
        let w = r?;
        sum += w;
        sum_sq += w * w;
    }
    let nf = samples as f64;
    let mean = sum / nf;
    let variance = (sum_sq / nf - mean * mean).max(0.0);
    let std_error_mean = (variance / nf).sqrt();
    let vol = volume(simplex)?.to_f64();
    Ok(MultiplicityEstimate {
        mean_inverse_multiplicity: mean,
        std_error: vol * std_error_mean,
        samples,
        estimated_det: vol * mean,
    })
}
