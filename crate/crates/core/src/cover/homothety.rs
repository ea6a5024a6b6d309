//! Homothety detection for intersections K ∩ (K+x), and exact boundary
//! overlap measures for simplex translates.

use num::Signed;

use crate::error::{CoverError, GeomError};
use crate::geom::polytope::Halfspace;
use crate::geom::radical::RadicalSum;
use crate::geom::{
    enumerate_facets, facet_surface_measure, intersect, to_hrep, volume, Intersection,
};
use crate::linalg::Vector;
use crate::ratext::exact_nth_root;
use crate::scalar::Scalar;
use crate::{Rat, RatVPolytope, RatVector};

/// A positive homothety `x ↦ λx + y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Homothety {
    pub lambda: Rat,
    pub translate: RatVector,
}

/// If K ∩ (K+x) is positively homothetic to K, return the exact homothety.
///
/// The intersection's facet-normal directions must match K's, the volume
/// ratio must have a rational n-th root, and the scaled-translated vertex
/// set must reproduce the intersection exactly; otherwise `None`.
pub fn homothety_check(
    body: &RatVPolytope,
    x: &RatVector,
) -> Result<Option<Homothety>, GeomError> {
    let n = body.dim();
    let body_h = to_hrep(body)?;
    let shifted = body_h.translate(x);
    let section = match intersect(&body_h, &shifted)? {
        Intersection::Empty => return Ok(None),
        Intersection::Polytope { body, affine_dim } => {
            if affine_dim < n {
                return Ok(None);
            }
            body
        }
    };

    if !normal_directions_match(body, &section)? {
        return Ok(None);
    }

    let ratio = volume(&section)? / volume(body)?;
    let Some(lambda) = exact_nth_root(&ratio, n as u32) else {
        return Ok(None);
    };
    if !lambda.is_positive() {
        return Ok(None);
    }

    // Vertex centroids are homothety-equivariant, which pins the translate.
    let y = &centroid(&section) - &centroid(body).scale(&lambda);
    let image = body.scale(&lambda).translate(&y);
    if image.vertex_set_eq(&section) {
        Ok(Some(Homothety {
            lambda,
            translate: y,
        }))
    } else {
        Ok(None)
    }
}

fn centroid(p: &RatVPolytope) -> RatVector {
    let n = p.dim();
    let mut sum: RatVector = Vector::zeros(n);
    for v in p.vertices() {
        sum = &sum + v;
    }
    sum.scale(&Rat::from_fraction(1, p.vertices().len() as i64))
}

fn normal_directions_match(a: &RatVPolytope, b: &RatVPolytope) -> Result<bool, GeomError> {
    let mut da = canonical_normals(a)?;
    let mut db = canonical_normals(b)?;
    da.sort_by(|x, y| x.0.cmp(&y.0));
    db.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(da == db)
}

fn canonical_normals(p: &RatVPolytope) -> Result<Vec<RatVector>, GeomError> {
    Ok(enumerate_facets(p.vertices())?
        .into_iter()
        .map(|f| {
            let mut n = f.halfspace.normal;
            Rat::canonicalize_direction(&mut n.0);
            n
        })
        .collect())
}

/// Σ over facets F of T of the (n−1)-measure of F ∩ (T+u), exact.
pub fn boundary_overlap(simplex: &RatVPolytope, u: &RatVector) -> Result<RadicalSum, CoverError> {
    let n = simplex.dim();
    if simplex.vertices().len() != n + 1 {
        return Err(CoverError::NotASimplex(format!(
            "{} vertices in dimension {n}",
            simplex.vertices().len()
        )));
    }
    let body_h = to_hrep(simplex)?;
    let shifted = body_h.translate(u);
    let facets = enumerate_facets(simplex.vertices())?;
    let mut total = RadicalSum::zero();
    for f in facets {
        // Clamp to the facet hyperplane with an equality (two inequalities).
        let mut halfspaces = body_h.halfspaces().to_vec();
        halfspaces.push(Halfspace {
            normal: -&f.halfspace.normal,
            offset: -f.halfspace.offset.clone(),
        });
        let facet_slab =
            crate::geom::HPolytope::from_halfspaces_unchecked(n, halfspaces);
        match intersect(&facet_slab, &shifted)? {
            Intersection::Empty => {}
            Intersection::Polytope { body, .. } => {
                let m = facet_surface_measure(n, &f.halfspace, body.vertices())?;
                total.add_assign(&m);
            }
        }
    }
    Ok(total)
}

/// Total boundary measure of a body, as a radical sum.
pub fn total_boundary_measure(body: &RatVPolytope) -> Result<RadicalSum, GeomError> {
    let mut total = RadicalSum::zero();
    for f in crate::geom::facet_measure(body)? {
        total.add_assign(&f.measure);
    }
    Ok(total)
}
