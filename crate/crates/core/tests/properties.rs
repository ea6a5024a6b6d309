//! Property tests for the geometry kernel and covering machinery, with
//! independent oracles for volume and 2-D hulls.

use num::{BigInt, One, Signed, Zero};
use proptest::prelude::*;

use cover_core::geom::{
    convex_hull, difference_body, enumerate_facets, general_difference_body, intersect,
    minkowski_sum, standard_simplex, to_hrep, to_vrep, volume, Intersection,
};
use cover_core::lattice::{lattice_points_in, Lattice};
use cover_core::linalg::{Matrix, Vector};
use cover_core::{Rat, RatVPolytope, RatVector, Scalar};

fn q(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Signed pyramid decomposition anchored at the origin, with facet volumes
/// recursed from the last incident vertex. A second triangulation route,
/// independent of the fan used by `volume`.
fn oracle_volume(points: &[RatVector], n: usize) -> Rat {
    if n == 1 {
        let mut lo = points[0][0].clone();
        let mut hi = points[0][0].clone();
        for p in points {
            if p[0] < lo {
                lo = p[0].clone();
            }
            if p[0] > hi {
                hi = p[0].clone();
            }
        }
        return hi - lo;
    }
    let facets = enumerate_facets(points).expect("full-dimensional input");
    let mut total = Rat::zero();
    for f in facets {
        // Signed height of the origin below the facet hyperplane.
        let signed = f.halfspace.offset.clone();
        let (k, nk) = {
            let normal = &f.halfspace.normal;
            let mut k = 0;
            let mut best = normal[0].abs();
            for i in 1..normal.dim() {
                if normal[i].abs() > best {
                    best = normal[i].abs();
                    k = i;
                }
            }
            (k, normal[k].clone())
        };
        let proj: Vec<RatVector> = f
            .incident
            .iter_ones()
            .map(|i| {
                Vector(
                    points[i]
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != k)
                        .map(|(_, c)| c.clone())
                        .collect(),
                )
            })
            .collect();
        // Recurse from the back of the projected list to vary the fan.
        let mut reversed = proj;
        reversed.reverse();
        let base = oracle_volume(&reversed, n - 1);
        total += signed * base / nk.abs();
    }
    total / Rat::from_int(n as i64)
}

/// Gift-wrapping 2-D hull oracle returning the vertex count.
fn hull_2d_oracle(points: &[RatVector]) -> Vec<RatVector> {
    let mut pts: Vec<RatVector> = Vec::new();
    for p in points {
        if !pts.contains(p) {
            pts.push(p.clone());
        }
    }
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    let cross = |o: &RatVector, a: &RatVector, b: &RatVector| -> Rat {
        (a[0].clone() - o[0].clone()) * (b[1].clone() - o[1].clone())
            - (a[1].clone() - o[1].clone()) * (b[0].clone() - o[0].clone())
    };
    let mut lower: Vec<RatVector> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<RatVector> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-8i64..=8, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

fn point(dim: usize) -> impl Strategy<Value = RatVector> {
    proptest::collection::vec(small_rat(), dim).prop_map(Vector)
}

fn full_dim_body(dim: usize, extra: usize) -> impl Strategy<Value = RatVPolytope> {
    proptest::collection::vec(point(dim), dim + 1 + extra).prop_filter_map(
        "needs full-dimensional hull",
        move |pts| convex_hull(&pts).ok(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn volume_is_translation_invariant(body in full_dim_body(3, 3), t in point(3)) {
        let single = RatVPolytope::from_vertices_unchecked(3, vec![t.clone()]);
        let shifted = minkowski_sum(&body, &single).unwrap();
        prop_assert_eq!(volume(&shifted).unwrap(), volume(&body).unwrap());
    }

    #[test]
    fn volume_scales_with_degree_n(body in full_dim_body(2, 3), s in small_rat()) {
        prop_assume!(!s.is_zero());
        let scaled = body.scale(&s);
        let mut factor = Rat::one();
        for _ in 0..2 { factor *= s.abs(); }
        prop_assert_eq!(volume(&scaled).unwrap(), factor * volume(&body).unwrap());
    }

    #[test]
    fn dual_roundtrip_preserves_vertices(body in full_dim_body(3, 2)) {
        let back = to_vrep(&to_hrep(&body).unwrap()).unwrap();
        prop_assert!(back.vertex_set_eq(&body));
    }

    #[test]
    fn hrep_contains_every_vertex(body in full_dim_body(3, 2)) {
        let h = to_hrep(&body).unwrap();
        for v in body.vertices() {
            prop_assert!(h.contains(v).unwrap());
        }
    }

    #[test]
    fn fan_volume_matches_signed_oracle(body in full_dim_body(4, 2)) {
        let direct = volume(&body).unwrap();
        let oracle = oracle_volume(body.vertices(), 4);
        prop_assert_eq!(direct, oracle);
    }

    #[test]
    fn plane_hull_matches_gift_wrapping(pts in proptest::collection::vec(point(2), 3..10)) {
        let wrapped = hull_2d_oracle(&pts);
        prop_assume!(wrapped.len() >= 3);
        let hull = convex_hull(&pts).unwrap();
        let expect = RatVPolytope::from_vertices_unchecked(2, wrapped);
        prop_assert!(hull.vertex_set_eq(&expect));
    }

    #[test]
    fn intersection_is_inside_both_and_commutes(a in full_dim_body(2, 3), b in full_dim_body(2, 3)) {
        let ha = to_hrep(&a).unwrap();
        let hb = to_hrep(&b).unwrap();
        let ab = intersect(&ha, &hb).unwrap();
        let ba = intersect(&hb, &ha).unwrap();
        match (&ab, &ba) {
            (Intersection::Empty, Intersection::Empty) => {}
            (Intersection::Polytope { body: x, .. }, Intersection::Polytope { body: y, .. }) => {
                for v in x.vertices() {
                    prop_assert!(ha.contains(v).unwrap());
                    prop_assert!(hb.contains(v).unwrap());
                }
                prop_assert!(x.vertex_set_eq(y));
            }
            _ => prop_assert!(false, "intersection not commutative"),
        }
    }

    #[test]
    fn difference_body_reflection_symmetry(body in full_dim_body(2, 2),
                                           mu in (1i64..=4, 1i64..=2).prop_map(|(n,d)| q(n,d)),
                                           nu in (1i64..=4, 1i64..=2).prop_map(|(n,d)| q(n,d))) {
        let ab = general_difference_body(&body, &mu, &nu).unwrap();
        let ba = general_difference_body(&body, &nu, &mu).unwrap();
        prop_assert!(ab.reflect().vertex_set_eq(&ba));
    }

    #[test]
    fn lattice_points_symmetric_in_difference_body(body in full_dim_body(2, 2)) {
        let d = difference_body(&body).unwrap();
        let z2 = Lattice::from_int_rows(&[&[1, 0], &[0, 1]]).unwrap();
        let pts = lattice_points_in(&to_hrep(&d).unwrap(), &z2).unwrap();
        for p in &pts {
            prop_assert!(pts.iter().any(|m| *m == -p));
        }
    }

    #[test]
    fn covering_verdict_is_unimodular_invariant(shift in -2i64..=2) {
        // Same lattice described by two bases must get the same verdict.
        let t2 = standard_simplex::<Rat>(2);
        let base = Matrix::from_rows(vec![
            Vector(vec![q(3, 5), q(-3, 10)]),
            Vector(vec![q(-3, 10), q(3, 5)]),
        ]);
        // Unimodular transform: row1 += shift * row0.
        let transformed = Matrix::from_rows(vec![
            base.row(0).clone(),
            &(base.row(1).clone()) + &base.row(0).scale(&Rat::from_int(shift)),
        ]);
        let l1 = Lattice::new(base).unwrap();
        let l2 = Lattice::new(transformed).unwrap();
        let c1 = cover_core::cover::is_covering(&t2, &l1, 7).unwrap();
        let c2 = cover_core::cover::is_covering(&t2, &l2, 7).unwrap();
        prop_assert_eq!(c1.verdict.is_covered(), c2.verdict.is_covered());
    }

    #[test]
    fn simplex_homothety_exists_inside_difference_body(
        xn in -7i64..=7, xd in 8i64..=12, yn in -7i64..=7, yd in 8i64..=12
    ) {
        // x/xd, y/yd with |x|<xd etc. lies inside int D(T₂) when the
        // intersection is full-dimensional; Lemma 2's forward direction.
        let t2 = standard_simplex::<Rat>(2);
        let x = Vector(vec![q(xn, xd), q(yn, yd)]);
        let ht = to_hrep(&t2).unwrap();
        let shifted = ht.translate(&x);
        if let Intersection::Polytope { affine_dim: 2, .. } = intersect(&ht, &shifted).unwrap() {
            let h = cover_core::cover::homothety_check(&t2, &x).unwrap();
            prop_assert!(h.is_some(), "missing homothety at {:?}", x.to_f64_vec());
        }
    }
}

#[test]
fn hexagon_matches_both_oracles() {
    // Fixed cross-check of the two oracles on D(T₂).
    let t2 = standard_simplex::<Rat>(2);
    let mut diffs = Vec::new();
    for a in t2.vertices() {
        for b in t2.vertices() {
            diffs.push(a - b);
        }
    }
    let hull = convex_hull(&diffs).unwrap();
    assert_eq!(hull.vertices().len(), 6);
    assert_eq!(hull_2d_oracle(&diffs).len(), 6);
    assert_eq!(volume(&hull).unwrap(), q(3, 1));
    assert_eq!(oracle_volume(hull.vertices(), 2), q(3, 1));
}
