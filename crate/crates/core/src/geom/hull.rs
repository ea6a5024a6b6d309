//! Hull construction and exact V/H dual conversion via double description.

use crate::error::GeomError;
use crate::geom::dd::{extreme_rays, BitSet};
use crate::geom::polytope::{Halfspace, HPolytope, VPolytope};
use crate::linalg::{affine_dim, rank_of, Vector};
use crate::scalar::Scalar;

pub const MAX_EXACT_DIM: usize = 6;

fn check_dim(n: usize) -> Result<(), GeomError> {
    if n == 0 || n > MAX_EXACT_DIM {
        return Err(GeomError::UnsupportedDimension(n));
    }
    Ok(())
}

/// A facet with the indices of the input points lying on it.
#[derive(Clone, Debug)]
pub struct Facet<T> {
    pub halfspace: Halfspace<T>,
    pub incident: BitSet,
}

/// Facet enumeration of `conv(points)` for a full-dimensional point set.
///
/// Facets are the extreme rays of the cone of valid inequalities
/// `{(a, b) : a·p <= b for all input points p}`; the tight set of each ray is
/// exactly the set of incident input points.
pub fn enumerate_facets<T: Scalar>(points: &[Vector<T>]) -> Result<Vec<Facet<T>>, GeomError> {
    let n = points
        .first()
        .map(Vector::dim)
        .ok_or_else(|| GeomError::DegenerateInput("empty point set".into()))?;
    check_dim(n)?;
    if points.iter().any(|p| p.dim() != n) {
        return Err(GeomError::DimensionMismatch {
            expected: n,
            got: points.iter().map(Vector::dim).find(|&d| d != n).unwrap(),
        });
    }
    // Row (p, -1) acting on (a, b).
    let rows: Vec<Vector<T>> = points.iter().map(|p| p.extended(-T::one())).collect();
    let rays = extreme_rays(&rows).map_err(|e| match e {
        GeomError::SingularMatrix => GeomError::DegenerateInput(format!(
            "points span an affine subspace of dimension {} < {}",
            affine_dim(points),
            n
        )),
        other => other,
    })?;
    let mut facets = Vec::with_capacity(rays.len());
    for ray in rays {
        let (ab, tight) = (ray.dir, ray.tight);
        let normal = Vector(ab.0[..n].to_vec());
        if normal.is_zero() {
            // The trivial ray (0, 1); not a facet.
            continue;
        }
        facets.push(Facet {
            halfspace: Halfspace {
                normal,
                offset: ab.0[n].clone(),
            },
            incident: tight,
        });
    }
    Ok(facets)
}

/// Irredundant convex hull of a full-dimensional point set.
pub fn convex_hull<T: Scalar>(points: &[Vector<T>]) -> Result<VPolytope<T>, GeomError> {
    let facets = enumerate_facets(points)?;
    let n = points[0].dim();
    let mut vertices = Vec::new();
    let mut seen: Vec<&Vector<T>> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if seen.contains(&p) {
            continue;
        }
        let tight_normals: Vec<Vector<T>> = facets
            .iter()
            .filter(|f| f.incident.contains(i))
            .map(|f| f.halfspace.normal.clone())
            .collect();
        if rank_of(&tight_normals) == n {
            vertices.push(p.clone());
            seen.push(p);
        }
    }
    Ok(VPolytope::from_vertices_unchecked(n, vertices))
}

/// Exact facet description of a full-dimensional vertex polytope.
pub fn to_hrep<T: Scalar>(p: &VPolytope<T>) -> Result<HPolytope<T>, GeomError> {
    let facets = enumerate_facets(p.vertices())?;
    Ok(HPolytope::from_halfspaces_unchecked(
        p.dim(),
        facets.into_iter().map(|f| f.halfspace).collect(),
    ))
}

/// Vertex enumeration of a bounded halfspace system.
pub fn to_vrep<T: Scalar>(h: &HPolytope<T>) -> Result<VPolytope<T>, GeomError> {
    match vertex_enumeration(h.dim(), h.halfspaces())? {
        Intersection::Polytope { body, .. } => Ok(body),
        Intersection::Empty => Err(GeomError::DegenerateInput(
            "halfspace system is infeasible".into(),
        )),
    }
}

/// Result of intersecting halfspace systems: possibly empty, possibly a
/// lower-dimensional face (reported with its affine-hull dimension).
#[derive(Clone, Debug)]
pub enum Intersection<T> {
    Empty,
    Polytope { body: VPolytope<T>, affine_dim: usize },
}

impl<T: Scalar> Intersection<T> {
    pub fn body(&self) -> Option<&VPolytope<T>> {
        match self {
            Intersection::Empty => None,
            Intersection::Polytope { body, .. } => Some(body),
        }
    }
}

/// Exact intersection of two halfspace polytopes.
pub fn intersect<T: Scalar>(
    a: &HPolytope<T>,
    b: &HPolytope<T>,
) -> Result<Intersection<T>, GeomError> {
    if a.dim() != b.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let mut halfspaces = a.halfspaces().to_vec();
    halfspaces.extend_from_slice(b.halfspaces());
    vertex_enumeration(a.dim(), &halfspaces)
}

/// Shared vertex-enumeration core: homogenize `normal·x <= offset` rows into
/// the cone `{(x, t) : normal·x - offset·t <= 0, -t <= 0}` and read vertices
/// off the extreme rays with positive last coordinate.
fn vertex_enumeration<T: Scalar>(
    n: usize,
    halfspaces: &[Halfspace<T>],
) -> Result<Intersection<T>, GeomError> {
    check_dim(n)?;
    let mut rows: Vec<Vector<T>> = Vec::with_capacity(halfspaces.len() + 1);
    for h in halfspaces {
        if h.normal.is_zero() {
            if h.offset.is_negative() {
                return Ok(Intersection::Empty);
            }
            continue; // trivially satisfied
        }
        rows.push(h.normal.extended(-h.offset.clone()));
    }
    rows.push(Vector::zeros(n).extended(-T::one()));
    let rays = extreme_rays(&rows).map_err(|e| match e {
        GeomError::SingularMatrix => {
            GeomError::UnboundedInput("halfspace normals do not span the space".into())
        }
        other => other,
    })?;

    let mut vertices = Vec::new();
    for ray in rays {
        let t = ray.dir.0[n].clone();
        if t.is_zero() {
            if Vector(ray.dir.0[..n].to_vec()).is_zero() {
                continue;
            }
            return Err(GeomError::UnboundedInput(
                "halfspaces admit a recession direction".into(),
            ));
        }
        debug_assert!(t.is_positive());
        let v = Vector(
            ray.dir.0[..n]
                .iter()
                .map(|c| c.clone() / t.clone())
                .collect(),
        );
        vertices.push(v);
    }
    if vertices.is_empty() {
        return Ok(Intersection::Empty);
    }
    let ad = affine_dim(&vertices);
    Ok(Intersection::Polytope {
        body: VPolytope::from_vertices_unchecked(n, vertices),
        affine_dim: ad,
    })
}

/// Minkowski sum via the hull of pairwise vertex sums.
pub fn minkowski_sum<T: Scalar>(
    p: &VPolytope<T>,
    q: &VPolytope<T>,
) -> Result<VPolytope<T>, GeomError> {
    if p.dim() != q.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: p.dim(),
            got: q.dim(),
        });
    }
    // A single point only translates; this also covers degenerate markers.
    if q.vertices().len() == 1 {
        return Ok(p.translate(&q.vertices()[0]));
    }
    if p.vertices().len() == 1 {
        return Ok(q.translate(&p.vertices()[0]));
    }
    let mut sums = Vec::with_capacity(p.vertices().len() * q.vertices().len());
    for a in p.vertices() {
        for b in q.vertices() {
            sums.push(a + b);
        }
    }
    convex_hull(&sums)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{BigRational, One, Zero};

    type Q = BigRational;

    fn v(coords: &[i64]) -> Vector<Q> {
        Vector::from_ints(coords)
    }

    fn vq(coords: &[(i64, i64)]) -> Vector<Q> {
        Vector(coords.iter().map(|&(n, d)| Q::from_fraction(n, d)).collect())
    }

    fn triangle2() -> VPolytope<Q> {
        VPolytope::from_vertices_unchecked(2, vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1])])
    }

    #[test]
    fn hull_drops_interior_point() {
        let pts = vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), vq(&[(1, 4), (1, 4)])];
        let hull = convex_hull(&pts).unwrap();
        assert!(hull.vertex_set_eq(&triangle2()));
    }

    #[test]
    fn hull_of_one_dim_segment() {
        let pts = vec![v(&[0]), v(&[1]), vq(&[(1, 2)])];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.vertices().len(), 2);
    }

    #[test]
    fn hull_rejects_flat_input() {
        let pts = vec![v(&[0, 0]), v(&[1, 1]), v(&[2, 2])];
        assert!(matches!(
            convex_hull(&pts),
            Err(GeomError::DegenerateInput(_))
        ));
    }

    #[test]
    fn triangle_hrep_is_the_three_standard_facets() {
        let h = to_hrep(&triangle2()).unwrap();
        assert_eq!(h.halfspaces().len(), 3);
        // x >= 0, y >= 0, x + y <= 1 up to positive scaling.
        for hs in h.halfspaces() {
            let n = &hs.normal;
            let claim = (n == &v(&[-1, 0]) && hs.offset == Q::zero())
                || (n == &v(&[0, -1]) && hs.offset == Q::zero())
                || (n == &v(&[1, 1]) && hs.offset == Q::one());
            assert!(claim, "unexpected facet {:?}", hs);
        }
    }

    #[test]
    fn roundtrip_preserves_vertices() {
        let diffs: Vec<Vector<Q>> = {
            let t = triangle2();
            let mut d = Vec::new();
            for a in t.vertices() {
                for b in t.vertices() {
                    d.push(a - b);
                }
            }
            d
        };
        let hex = convex_hull(&diffs).unwrap();
        assert_eq!(hex.vertices().len(), 6);
        let back = to_vrep(&to_hrep(&hex).unwrap()).unwrap();
        assert!(back.vertex_set_eq(&hex));
    }

    #[test]
    fn unbounded_system_is_detected() {
        let h = HPolytope::from_halfspaces_unchecked(
            2,
            vec![Halfspace {
                normal: v(&[-1, 0]),
                offset: Q::zero(),
            }],
        );
        assert!(matches!(to_vrep(&h), Err(GeomError::UnboundedInput(_))));
    }

    #[test]
    fn intersect_triangle_with_shifted_copy() {
        let t = triangle2();
        let ht = to_hrep(&t).unwrap();
        let shifted = ht.translate(&vq(&[(1, 2), (0, 1)]));
        let got = intersect(&ht, &shifted).unwrap();
        let body = got.body().expect("nonempty");
        let expect = VPolytope::from_vertices_unchecked(
            2,
            vec![vq(&[(1, 2), (0, 1)]), v(&[1, 0]), vq(&[(1, 2), (1, 2)])],
        );
        assert!(body.vertex_set_eq(&expect));
    }

    #[test]
    fn intersect_disjoint_is_empty() {
        let t = triangle2();
        let ht = to_hrep(&t).unwrap();
        let far = ht.translate(&v(&[2, 2]));
        assert!(matches!(intersect(&ht, &far).unwrap(), Intersection::Empty));
    }

    #[test]
    fn intersect_self_is_identity() {
        let t = triangle2();
        let ht = to_hrep(&t).unwrap();
        let got = intersect(&ht, &ht).unwrap();
        assert!(got.body().unwrap().vertex_set_eq(&t));
    }

    #[test]
    fn minkowski_segments_make_square()  {
        let s1 = VPolytope::from_vertices_unchecked(2, vec![v(&[0, 0]), v(&[1, 0])]);
        let s2 = VPolytope::from_vertices_unchecked(2, vec![v(&[0, 0]), v(&[0, 1])]);
        let sq = minkowski_sum(&s1, &s2).unwrap();
        assert_eq!(sq.vertices().len(), 4);
    }

    #[test]
    fn minkowski_with_point_translates() {
        let t = triangle2();
        let shifted = minkowski_sum(
            &t,
            &VPolytope::from_vertices_unchecked(2, vec![v(&[3, 4])]),
        )
        .unwrap();
        assert!(shifted.vertex_set_eq(&t.translate(&v(&[3, 4]))));
    }
}
