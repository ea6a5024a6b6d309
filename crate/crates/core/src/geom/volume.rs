//! Exact polytope volume and facet surface measures.

use num::{BigRational, One, Signed};

use crate::error::GeomError;
use crate::geom::hull::enumerate_facets;
use crate::geom::polytope::{Halfspace, VPolytope};
use crate::geom::radical::SqrtQuantity;
use crate::linalg::{affine_dim, Vector};
use crate::scalar::Scalar;

/// Exact n-volume of a full-dimensional vertex polytope.
///
/// Pyramid decomposition from the first vertex: each facet not through it
/// contributes `slack · vol(projected facet) / (n · |normal_k|)`, where the
/// facet is projected along coordinate `k`. Independent of which coordinate
/// is dropped and of vertex order.
pub fn volume<T: Scalar>(p: &VPolytope<T>) -> Result<T, GeomError> {
    volume_of_points(p.dim(), p.vertices())
}

fn volume_of_points<T: Scalar>(n: usize, pts: &[Vector<T>]) -> Result<T, GeomError> {
    if affine_dim(pts) < n {
        return Err(GeomError::DegenerateInput(format!(
            "affine hull has dimension {} < {}",
            affine_dim(pts),
            n
        )));
    }
    if n == 1 {
        let mut lo = pts[0][0].clone();
        let mut hi = pts[0][0].clone();
        for p in &pts[1..] {
            if p[0] < lo {
                lo = p[0].clone();
            }
            if p[0] > hi {
                hi = p[0].clone();
            }
        }
        return Ok(hi - lo);
    }
    let facets = enumerate_facets(pts)?;
    let apex = &pts[0];
    let mut total = T::zero();
    for f in &facets {
        let slack = f.halfspace.slack(apex);
        if slack.is_zero() {
            continue;
        }
        let (k, nk) = drop_coordinate(&f.halfspace.normal);
        let proj: Vec<Vector<T>> = f
            .incident
            .iter_ones()
            .map(|i| drop_coord(&pts[i], k))
            .collect();
        let base = volume_of_points(n - 1, &proj)?;
        total = total + slack * base / nk.abs();
    }
    Ok(total / T::from_int(n as i64))
}

fn drop_coordinate<T: Scalar>(normal: &Vector<T>) -> (usize, T) {
    let mut k = 0;
    let mut best = normal[0].abs();
    for i in 1..normal.dim() {
        let a = normal[i].abs();
        if a > best {
            best = a;
            k = i;
        }
    }
    (k, normal[k].clone())
}

fn drop_coord<T: Scalar>(v: &Vector<T>, k: usize) -> Vector<T> {
    let mut out = Vec::with_capacity(v.dim() - 1);
    for (i, c) in v.0.iter().enumerate() {
        if i != k {
            out.push(c.clone());
        }
    }
    Vector(out)
}

/// A facet of a rational polytope with its exact (n-1)-dimensional measure.
#[derive(Clone, Debug)]
pub struct FacetMeasure {
    pub halfspace: Halfspace<BigRational>,
    pub vertices: Vec<Vector<BigRational>>,
    pub measure: SqrtQuantity,
}

/// Exact surface measures of every facet, as `r·√q` quantities.
///
/// The facet is projected isometrically-up-to-scale along a coordinate axis:
/// the projected rational volume picks up the factor `‖normal‖ / |normal_k|`,
/// whose irrational part is carried symbolically.
pub fn facet_measure(p: &VPolytope<BigRational>) -> Result<Vec<FacetMeasure>, GeomError> {
    let n = p.dim();
    if !p.is_full_dim() {
        return Err(GeomError::DegenerateInput(
            "facet measures need a full-dimensional body".into(),
        ));
    }
    let facets = enumerate_facets(p.vertices())?;
    let mut out = Vec::with_capacity(facets.len());
    for f in facets {
        let vertices: Vec<Vector<BigRational>> = f
            .incident
            .iter_ones()
            .map(|i| p.vertices()[i].clone())
            .collect();
        let measure = facet_surface_measure(n, &f.halfspace, &vertices)?;
        out.push(FacetMeasure {
            halfspace: f.halfspace,
            vertices,
            measure,
        });
    }
    Ok(out)
}

/// Measure of a polytope lying inside the hyperplane `normal·x = offset`.
///
/// `vertices` may describe any polytope in that hyperplane, not only a whole
/// facet; degenerate (lower than (n-1)-dimensional) sets measure zero.
pub fn facet_surface_measure(
    n: usize,
    halfspace: &Halfspace<BigRational>,
    vertices: &[Vector<BigRational>],
) -> Result<SqrtQuantity, GeomError> {
    if n == 1 {
        // 0-dimensional measure: counting measure of a single point.
        return Ok(SqrtQuantity::rational(BigRational::one()));
    }
    let (k, nk) = drop_coordinate(&halfspace.normal);
    let proj: Vec<Vector<BigRational>> = vertices.iter().map(|v| drop_coord(v, k)).collect();
    if affine_dim(&proj) < n - 1 {
        return Ok(SqrtQuantity::zero());
    }
    let base = volume_of_points(n - 1, &proj)?;
    let scale = base / nk.abs();
    Ok(SqrtQuantity::new(scale, halfspace.normal.norm_sq()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::hull::convex_hull;
    use num::BigInt;

    type Q = BigRational;

    fn v(coords: &[i64]) -> Vector<Q> {
        Vector::from_ints(coords)
    }

    fn q(n: i64, d: i64) -> Q {
        Q::from_fraction(n, d)
    }

    fn simplex(n: usize) -> VPolytope<Q> {
        let mut pts = vec![Vector::zeros(n)];
        for i in 0..n {
            pts.push(Vector::unit(n, i));
        }
        VPolytope::from_vertices_unchecked(n, pts)
    }

    #[test]
    fn standard_simplex_volume_is_inverse_factorial() {
        assert_eq!(volume(&simplex(3)).unwrap(), q(1, 6));
        assert_eq!(volume(&simplex(5)).unwrap(), q(1, 120));
    }

    #[test]
    fn hexagon_volume_is_three() {
        let t = simplex(2);
        let mut diffs = Vec::new();
        for a in t.vertices() {
            for b in t.vertices() {
                diffs.push(a - b);
            }
        }
        let hex = convex_hull(&diffs).unwrap();
        assert_eq!(volume(&hex).unwrap(), q(3, 1));
    }

    #[test]
    fn unit_cube_from_all_vertices() {
        let n = 4;
        let mut pts = Vec::new();
        for mask in 0..1u32 << n {
            let coords: Vec<i64> = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
            pts.push(v(&coords));
        }
        let cube = convex_hull(&pts).unwrap();
        assert_eq!(cube.vertices().len(), 16);
        assert_eq!(volume(&cube).unwrap(), q(1, 1));
    }

    #[test]
    fn zero_scale_marker_is_rejected_by_volume() {
        let collapsed = simplex(2).scale(&Q::from_int(0));
        assert_eq!(collapsed.vertices().len(), 1);
        assert!(volume(&collapsed).is_err());
    }

    #[test]
    fn degenerate_body_is_rejected() {
        let flat = VPolytope::from_vertices_unchecked(2, vec![v(&[0, 0]), v(&[1, 1])]);
        assert!(volume(&flat).is_err());
    }

    #[test]
    fn triangle_facet_lengths() {
        let fm = facet_measure(&simplex(2)).unwrap();
        assert_eq!(fm.len(), 3);
        let mut lens: Vec<(Q, BigInt)> = fm
            .iter()
            .map(|f| (f.measure.scale().clone(), f.measure.radicand().clone()))
            .collect();
        lens.sort();
        // 1, 1, √2
        assert_eq!(lens[0], (q(1, 1), BigInt::from(1)));
        assert_eq!(lens[1], (q(1, 1), BigInt::from(1)));
        assert_eq!(lens[2], (q(1, 1), BigInt::from(2)));
    }

    #[test]
    fn square_facet_lengths_are_unit() {
        let sq = convex_hull(&[v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap();
        let fm = facet_measure(&sq).unwrap();
        assert_eq!(fm.len(), 4);
        for f in fm {
            assert!(f.measure.is_rational());
            assert_eq!(f.measure.scale(), &q(1, 1));
        }
    }

    #[test]
    fn rational_regular_tetrahedron_facet_area() {
        // conv{(0,0,0),(1,1,0),(1,0,1),(0,1,1)}: regular with edge √2; each
        // facet is equilateral with area (√3/4)·2 = √3/2.
        let t = VPolytope::from_vertices_unchecked(
            3,
            vec![v(&[0, 0, 0]), v(&[1, 1, 0]), v(&[1, 0, 1]), v(&[0, 1, 1])],
        );
        let fm = facet_measure(&t).unwrap();
        assert_eq!(fm.len(), 4);
        for f in fm {
            assert_eq!(f.measure.scale(), &q(1, 2));
            assert_eq!(f.measure.radicand(), &BigInt::from(3));
        }
    }
}
