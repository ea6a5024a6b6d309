//! Exact convex-polytope kernel, generic over the scalar type.

pub mod dd;
pub mod hull;
pub mod polytope;
pub mod radical;
pub mod sample;
pub mod volume;

pub use hull::{
    convex_hull, enumerate_facets, intersect, minkowski_sum, to_hrep, to_vrep, Facet,
    Intersection, MAX_EXACT_DIM,
};
pub use polytope::{Halfspace, HPolytope, VPolytope};
pub use radical::{RadicalSum, SqrtQuantity};
pub use sample::{sample_uniform_simplex, seeded_rng};
pub use volume::{facet_measure, facet_surface_measure, volume, FacetMeasure};

use crate::error::GeomError;
use crate::linalg::Vector;
use crate::scalar::Scalar;

/// The standard simplex conv{0, e₁, …, eₙ}.
pub fn standard_simplex<T: Scalar>(n: usize) -> VPolytope<T> {
    let mut pts = vec![Vector::zeros(n)];
    for i in 0..n {
        pts.push(Vector::unit(n, i));
    }
    VPolytope::from_vertices_unchecked(n, pts)
}

/// The cube [0,1]ⁿ.
pub fn unit_cube<T: Scalar>(n: usize) -> VPolytope<T> {
    let pts = (0..1u32 << n)
        .map(|mask| Vector((0..n).map(|i| T::from_int(((mask >> i) & 1) as i64)).collect()))
        .collect();
    VPolytope::from_vertices_unchecked(n, pts)
}

/// `μK - νK`, the generalized difference body, as an irredundant hull.
pub fn general_difference_body<T: Scalar>(
    body: &VPolytope<T>,
    mu: &T,
    nu: &T,
) -> Result<VPolytope<T>, GeomError> {
    minkowski_sum(&body.scale(mu), &body.scale(&-nu.clone()))
}

/// `D(K) = K + (-K)`.
pub fn difference_body<T: Scalar>(body: &VPolytope<T>) -> Result<VPolytope<T>, GeomError> {
    general_difference_body(body, &T::one(), &T::one())
}
