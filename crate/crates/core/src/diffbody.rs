//! Generalized difference bodies μK − νK: the closed-form simplex volume
//! identity, its constructive decomposition, mixed-volume profiles, and the
//! classical volume-ratio bound audits.

use num::{BigInt, One, Signed, Zero};
use rayon::prelude::*;

use crate::error::GeomError;
use crate::geom::{
    convex_hull, general_difference_body, intersect, to_hrep, volume, VPolytope,
};
use crate::linalg::Vector;
use crate::ratext::{binomial, factorial};
use crate::report::{AuditReport, AuditValue};
use crate::scalar::Scalar;
use crate::{Rat, RatVPolytope, RatVector};

pub use crate::geom::difference_body;

/// Coefficients of vol(μK − νK)/vol(K) = Σ cᵢ μ^i ν^(n-i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioPolynomial {
    pub n: usize,
    pub coefficients: Vec<Rat>,
}

/// Σ C(n,i)² μ^i ν^(n-i), the exact simplex ratio.
pub fn rs_ratio_formula(n: usize, mu: &Rat, nu: &Rat) -> Rat {
    assert!(n >= 1);
    let mut total = Rat::zero();
    for i in 0..=n {
        let c = binomial(n as u64, i as u64);
        let coef = Rat::from_integer(&c * &c);
        total += coef * pow_rat(mu, i as u32) * pow_rat(nu, (n - i) as u32);
    }
    total
}

fn pow_rat(base: &Rat, exp: u32) -> Rat {
    let mut out = Rat::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// One orthogonal face pair of the standard simplex: the faces through the
/// origin spanned by a subset of the basis vectors and by its complement.
#[derive(Clone, Debug)]
pub struct SimplexFacePair {
    /// Dimension i of the face (subset size).
    pub i: usize,
    /// Index j within the C(n,i) faces of that dimension, 1-based.
    pub j: usize,
    /// μ · conv({0} ∪ {eₖ : k ∈ S})
    pub face: RatVPolytope,
    /// −ν · conv({0} ∪ {eₖ : k ∉ S})
    pub coface: RatVPolytope,
}

/// One piece of the decomposition with its claimed exact volume.
#[derive(Clone, Debug)]
pub struct DecompositionPiece {
    pub pair: SimplexFacePair,
    /// μF − νF*, the Minkowski sum of face and coface.
    pub body: RatVPolytope,
    /// μ^i ν^(n-i) / (i! (n-i)!)
    pub claimed_volume: Rat,
}

/// The 2ⁿ pieces covering μTₙ − νTₙ, generated combinatorially from subsets
/// of the standard basis.
pub fn simplex_decomposition(
    n: usize,
    mu: &Rat,
    nu: &Rat,
) -> Result<Vec<DecompositionPiece>, GeomError> {
    assert!((1..=5).contains(&n), "decomposition supported for 1 <= n <= 5");
    assert!(mu.is_positive() && nu.is_positive());
    let mut pieces = Vec::with_capacity(1 << n);
    let mut index_within_dim = vec![0usize; n + 1];
    for mask in 0..1u32 << n {
        let members: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).collect();
        let i = members.len();
        index_within_dim[i] += 1;
        let face = scaled_face(n, &members, mu);
        let complement: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 0).collect();
        let coface = scaled_face(n, &complement, &-nu.clone());
        let body = piece_body(&face, &coface);
        let claimed_volume = pow_rat(mu, i as u32) * pow_rat(nu, (n - i) as u32)
            / Rat::from_integer(factorial(i as u64) * factorial((n - i) as u64));
        pieces.push(DecompositionPiece {
            pair: SimplexFacePair {
                i,
                j: index_within_dim[i],
                face,
                coface,
            },
            body,
            claimed_volume,
        });
    }
    Ok(pieces)
}

fn scaled_face(n: usize, members: &[usize], scale: &Rat) -> RatVPolytope {
    let mut verts: Vec<RatVector> = vec![Vector::zeros(n)];
    for &k in members {
        verts.push(Vector::unit(n, k).scale(scale));
    }
    VPolytope::from_vertices_unchecked(n, verts)
}

/// Minkowski sum of a face and coface spanning complementary coordinate
/// subspaces: all pairwise sums are vertices, no hull call needed.
fn piece_body(face: &RatVPolytope, coface: &RatVPolytope) -> RatVPolytope {
    let mut verts = Vec::with_capacity(face.vertices().len() * coface.vertices().len());
    for a in face.vertices() {
        for b in coface.vertices() {
            verts.push(a + b);
        }
    }
    VPolytope::from_vertices_unchecked(face.dim(), verts)
}

/// Checks the decomposition against the assembled body: containment of every
/// piece, pairwise interior-disjointness (intersection volume zero), exact
/// piece volumes, and the total-volume identity.
pub fn verify_decomposition(
    pieces: &[DecompositionPiece],
    body: &RatVPolytope,
) -> Result<AuditReport, GeomError> {
    let mut report = AuditReport::new();
    let body_h = to_hrep(body)?;

    for (idx, piece) in pieces.iter().enumerate() {
        let inside = piece
            .body
            .vertices()
            .iter()
            .try_fold(true, |acc, v| Ok::<bool, GeomError>(acc && body_h.contains(v)?))?;
        report.push(
            format!("piece_{idx}_contained"),
            AuditValue::Count(u64::from(inside)),
            AuditValue::Count(1),
            inside,
            format!("i={} j={}", piece.pair.i, piece.pair.j),
        );
    }

    let piece_hreps: Vec<_> = pieces
        .iter()
        .map(|p| to_hrep(&p.body))
        .collect::<Result<Vec<_>, _>>()?;
    let index_pairs: Vec<(usize, usize)> = (0..pieces.len())
        .flat_map(|a| ((a + 1)..pieces.len()).map(move |b| (a, b)))
        .collect();
    let overlaps: Vec<(usize, usize, bool)> = index_pairs
        .par_iter()
        .map(|&(a, b)| {
            let full_dim = match intersect(&piece_hreps[a], &piece_hreps[b]) {
                Ok(crate::geom::Intersection::Polytope { affine_dim, body }) => {
                    affine_dim == body.dim()
                }
                Ok(crate::geom::Intersection::Empty) => false,
                Err(_) => true, // surfaced as a failed row below
            };
            (a, b, full_dim)
        })
        .collect();
    let mut disjoint_pairs = 0u64;
    for (a, b, full_dim) in overlaps {
        if full_dim {
            report.push(
                format!("pieces_{a}_{b}_interior_disjoint"),
                AuditValue::Text("interiors overlap".into()),
                AuditValue::Text("disjoint".into()),
                false,
                format!("pieces {a} and {b}"),
            );
        } else {
            disjoint_pairs += 1;
        }
    }
    report.push(
        "pairwise_interior_disjoint",
        AuditValue::Count(disjoint_pairs),
        AuditValue::Count(index_pairs.len() as u64),
        disjoint_pairs == index_pairs.len() as u64,
        "all pairs have intersection volume 0",
    );

    let mut total = Rat::zero();
    for (idx, piece) in pieces.iter().enumerate() {
        let vol = volume(&piece.body)?;
        total += vol.clone();
        report.push(
            format!("piece_{idx}_volume"),
            AuditValue::Rat(vol.clone()),
            AuditValue::Rat(piece.claimed_volume.clone()),
            vol == piece.claimed_volume,
            format!("i={} j={}", piece.pair.i, piece.pair.j),
        );
    }
    let body_vol = volume(body)?;
    report.push(
        "total_volume",
        AuditValue::Rat(total.clone()),
        AuditValue::Rat(body_vol.clone()),
        total == body_vol,
        "sum of piece volumes equals body volume",
    );
    Ok(report)
}

/// Mixed-volume profile W₀..Wₙ of K against −K: exact evaluation of
/// vol(K − λK) at the interpolation nodes followed by an exact Vandermonde
/// solve in Σ C(n,i) Wᵢ λ^i.
pub fn mixed_volume_profile(body: &RatVPolytope) -> Result<Vec<Rat>, GeomError> {
    mixed_volume_profile_at_nodes(body, 1)
}

/// Same profile from nodes λ = first..first+n; the result is node-independent.
pub fn mixed_volume_profile_at_nodes(
    body: &RatVPolytope,
    first: i64,
) -> Result<Vec<Rat>, GeomError> {
    let n = body.dim();
    assert!(first >= 1);
    let one = Rat::one();
    let mut rows = Vec::with_capacity(n + 1);
    let mut rhs = Vec::with_capacity(n + 1);
    for k in 0..=n as i64 {
        let lambda = Rat::from_int(first + k);
        let diff = general_difference_body(body, &one, &lambda)?;
        rhs.push(volume(&diff)?);
        let row: Vec<Rat> = (0..=n)
            .map(|i| {
                Rat::from_integer(binomial(n as u64, i as u64)) * pow_rat(&lambda, i as u32)
            })
            .collect();
        rows.push(Vector(row));
    }
    let system = crate::linalg::Matrix::from_rows(rows);
    let solution = system.solve(&Vector(rhs))?;
    Ok(solution.0)
}

/// Grid audit of the volume-ratio bounds: the symmetric-body lower bound
/// (μ+ν)ⁿ, the difference-body bounds 2ⁿ ≤ vol D(K)/vol K ≤ C(2n,n), and the
/// open upper-bound probe vol(μK−νK)/vol K ≤ Σ C(n,i)² μ^i ν^(n-i).
///
/// A probe violation would be a research event: it is reported as a loudly
/// unsatisfied row, never adjusted.
pub fn bound_audit(body: &RatVPolytope, grid: &[(Rat, Rat)]) -> Result<AuditReport, GeomError> {
    let n = body.dim();
    let vol = volume(body)?;
    let mut report = AuditReport::new();

    let rows: Vec<AuditReport> = grid
        .par_iter()
        .map(|(mu, nu)| -> Result<AuditReport, GeomError> {
            let mut local = AuditReport::new();
            let ratio = volume(&general_difference_body(body, mu, nu)?)? / vol.clone();
            let lower = pow_rat(&(mu + nu), n as u32);
            local.push(
                "brunn_minkowski_lower",
                AuditValue::Rat(lower.clone()),
                AuditValue::Rat(ratio.clone()),
                lower <= ratio,
                format!("mu={mu} nu={nu}: (mu+nu)^n <= vol(muK-nuK)/vol(K)"),
            );
            let conjectured = rs_ratio_formula(n, mu, nu);
            local.push(
                "simplex_maximality_probe",
                AuditValue::Rat(ratio.clone()),
                AuditValue::Rat(conjectured.clone()),
                ratio <= conjectured,
                format!(
                    "mu={mu} nu={nu}: probe of the open simplex-maximality conjecture{}",
                    if ratio <= conjectured {
                        ""
                    } else {
                        " -- VIOLATION: research event, please re-verify inputs"
                    }
                ),
            );
            Ok(local)
        })
        .collect::<Result<Vec<_>, _>>()?;
    for r in rows {
        report.merge(r);
    }

    let one = Rat::one();
    let d_ratio = volume(&general_difference_body(body, &one, &one)?)? / vol;
    let lower = pow_rat(&Rat::from_int(2), n as u32);
    let upper = Rat::from_integer(binomial(2 * n as u64, n as u64));
    report.push(
        "difference_body_lower",
        AuditValue::Rat(lower.clone()),
        AuditValue::Rat(d_ratio.clone()),
        lower <= d_ratio,
        "2^n <= vol(D(K))/vol(K)",
    );
    report.push(
        "difference_body_upper",
        AuditValue::Rat(d_ratio.clone()),
        AuditValue::Rat(upper.clone()),
        d_ratio <= upper,
        "vol(D(K))/vol(K) <= C(2n,n)",
    );
    Ok(report)
}

/// The exact integer chain Σ C(n,i)² 2^i ≤ 2ⁿ C(n,⌊n/2⌋)² ≤ 2^(3n).
pub fn ratio_chain_values(n: usize) -> (BigInt, BigInt, BigInt) {
    let mut lhs = BigInt::zero();
    for i in 0..=n {
        let c = binomial(n as u64, i as u64);
        lhs += &c * &c * (BigInt::one() << i);
    }
    let mid_binom = binomial(n as u64, (n / 2) as u64);
    let mid = (BigInt::one() << n) * &mid_binom * &mid_binom;
    let rhs = BigInt::one() << (3 * n);
    (lhs, mid, rhs)
}

/// Default (μ,ν) grid used by audits and the acceptance suite.
pub fn default_grid() -> Vec<(Rat, Rat)> {
    let values = [
        Rat::from_int(1),
        Rat::from_int(2),
        Rat::from_int(3),
        Rat::from_fraction(1, 2),
    ];
    let mut grid = Vec::new();
    for mu in &values {
        for nu in &values {
            grid.push((mu.clone(), nu.clone()));
        }
    }
    grid
}

/// Ratio polynomial of a body, recovered from its mixed-volume profile.
pub fn ratio_polynomial(body: &RatVPolytope) -> Result<RatioPolynomial, GeomError> {
    let n = body.dim();
    let vol = volume(body)?;
    let profile = mixed_volume_profile(body)?;
    let coefficients = profile
        .iter()
        .enumerate()
        .map(|(i, w)| Rat::from_integer(binomial(n as u64, i as u64)) * w / vol.clone())
        .collect();
    Ok(RatioPolynomial { n, coefficients })
}

/// Hull of `count` pseudo-random small-rational points, full-dimensional by
/// retry; used by the bound audits and the star-number oracle tests.
pub fn random_body(
    n: usize,
    count: usize,
    rng: &mut impl rand::Rng,
) -> Result<RatVPolytope, GeomError> {
    for _ in 0..64 {
        let pts: Vec<RatVector> = (0..count)
            .map(|_| {
                Vector(
                    (0..n)
                        .map(|_| Rat::from_fraction(rng.gen_range(-12i64..=12), rng.gen_range(1i64..=4)))
                        .collect(),
                )
            })
            .collect();
        match convex_hull(&pts) {
            Ok(hull) => return Ok(hull),
            Err(GeomError::DegenerateInput(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GeomError::DegenerateInput(
        "could not draw a full-dimensional random body".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{standard_simplex, unit_cube};

    fn q(n: i64, d: i64) -> Rat {
        Rat::from_fraction(n, d)
    }

    #[test]
    fn formula_matches_hand_sums() {
        assert_eq!(rs_ratio_formula(3, &q(1, 1), &q(1, 1)), q(20, 1));
        assert_eq!(rs_ratio_formula(3, &q(2, 1), &q(1, 1)), q(63, 1));
        // n = 1: μ + ν for any pair.
        assert_eq!(rs_ratio_formula(1, &q(5, 3), &q(7, 2)), q(5, 3) + q(7, 2));
    }

    #[test]
    fn formula_is_symmetric() {
        for n in 1..=6 {
            assert_eq!(
                rs_ratio_formula(n, &q(3, 2), &q(5, 7)),
                rs_ratio_formula(n, &q(5, 7), &q(3, 2))
            );
        }
    }

    #[test]
    fn central_binomial_at_equal_scales() {
        for n in 1..=10usize {
            assert_eq!(
                rs_ratio_formula(n, &q(1, 1), &q(1, 1)),
                Rat::from_integer(binomial(2 * n as u64, n as u64))
            );
        }
    }

    #[test]
    fn hexagon_ratio_is_central_binomial() {
        let t2 = standard_simplex::<Rat>(2);
        let hex = general_difference_body(&t2, &q(1, 1), &q(1, 1)).unwrap();
        let ratio = volume(&hex).unwrap() / volume(&t2).unwrap();
        assert_eq!(ratio, q(6, 1));
    }

    #[test]
    fn cube_ratio_is_two_to_n() {
        let cube = unit_cube::<Rat>(2);
        let d = difference_body(&cube).unwrap();
        assert_eq!(volume(&d).unwrap() / volume(&cube).unwrap(), q(4, 1));
    }

    #[test]
    fn t3_ratio_63_geometric() {
        let t3 = standard_simplex::<Rat>(3);
        let body = general_difference_body(&t3, &q(2, 1), &q(1, 1)).unwrap();
        let ratio = volume(&body).unwrap() / volume(&t3).unwrap();
        assert_eq!(ratio, q(63, 1));
    }

    #[test]
    fn reflection_swaps_scales() {
        let t3 = standard_simplex::<Rat>(3);
        let a = general_difference_body(&t3, &q(2, 1), &q(1, 2)).unwrap();
        let b = general_difference_body(&t3, &q(1, 2), &q(2, 1)).unwrap();
        assert!(a.reflect().vertex_set_eq(&b));
    }

    #[test]
    fn decomposition_of_plane_simplex() {
        let one = q(1, 1);
        let pieces = simplex_decomposition(2, &one, &one).unwrap();
        assert_eq!(pieces.len(), 4);
        let mut vols: Vec<Rat> = pieces
            .iter()
            .map(|p| volume(&p.body).unwrap())
            .collect();
        vols.sort();
        assert_eq!(vols, vec![q(1, 2), q(1, 2), q(1, 1), q(1, 1)]);
        let total: Rat = vols.into_iter().sum();
        assert_eq!(total, q(3, 1));
    }

    #[test]
    fn decomposition_of_segment() {
        let pieces = simplex_decomposition(1, &q(3, 1), &q(2, 1)).unwrap();
        assert_eq!(pieces.len(), 2);
        let mut vols: Vec<Rat> = pieces.iter().map(|p| p.claimed_volume.clone()).collect();
        vols.sort();
        assert_eq!(vols, vec![q(2, 1), q(3, 1)]);
    }

    #[test]
    fn sixteen_pieces_in_dim_four() {
        let one = q(1, 1);
        assert_eq!(simplex_decomposition(4, &one, &one).unwrap().len(), 16);
    }

    #[test]
    fn verification_passes_and_totals_match() {
        let t2 = standard_simplex::<Rat>(2);
        let mu = q(3, 1);
        let nu = q(1, 1);
        let body = general_difference_body(&t2, &mu, &nu).unwrap();
        let pieces = simplex_decomposition(2, &mu, &nu).unwrap();
        let report = verify_decomposition(&pieces, &body).unwrap();
        assert!(report.all_satisfied());
        assert_eq!(volume(&body).unwrap(), q(11, 1));
    }

    #[test]
    fn tampered_piece_fails_containment() {
        let one = q(1, 1);
        let body = general_difference_body(&standard_simplex::<Rat>(2), &one, &one).unwrap();
        let mut pieces = simplex_decomposition(2, &one, &one).unwrap();
        let verts: Vec<RatVector> = pieces[2]
            .body
            .vertices()
            .iter()
            .map(|v| v + &Vector(vec![q(3, 1), q(0, 1)]))
            .collect();
        pieces[2].body = VPolytope::from_vertices_unchecked(2, verts);
        let report = verify_decomposition(&pieces, &body).unwrap();
        assert!(!report.all_satisfied());
        assert!(!report.row("piece_2_contained").unwrap().satisfied);
    }

    #[test]
    fn simplex_profile_is_binomial() {
        for n in 1..=3usize {
            let t = standard_simplex::<Rat>(n);
            let vol = volume(&t).unwrap();
            let profile = mixed_volume_profile(&t).unwrap();
            for (i, w) in profile.iter().enumerate() {
                assert_eq!(
                    w,
                    &(Rat::from_integer(binomial(n as u64, i as u64)) * vol.clone())
                );
            }
        }
    }

    #[test]
    fn cube_profile_is_constant() {
        let cube = unit_cube::<Rat>(3);
        let profile = mixed_volume_profile(&cube).unwrap();
        for w in profile {
            assert_eq!(w, q(1, 1));
        }
    }

    #[test]
    fn profile_is_node_independent() {
        let t = standard_simplex::<Rat>(3);
        assert_eq!(
            mixed_volume_profile_at_nodes(&t, 1).unwrap(),
            mixed_volume_profile_at_nodes(&t, 2).unwrap()
        );
    }

    #[test]
    fn ratio_polynomial_has_unit_endpoints_and_positive_middle() {
        let mut rng = crate::geom::seeded_rng(7);
        for body in [
            standard_simplex::<Rat>(3),
            unit_cube::<Rat>(3),
            random_body(3, 7, &mut rng).unwrap(),
        ] {
            let poly = ratio_polynomial(&body).unwrap();
            assert_eq!(poly.coefficients.first().unwrap(), &q(1, 1));
            assert_eq!(poly.coefficients.last().unwrap(), &q(1, 1));
            assert!(poly.coefficients.iter().all(|c| c.is_positive()));
        }
        // Simplex coefficients are the squared binomials.
        let poly = ratio_polynomial(&standard_simplex::<Rat>(3)).unwrap();
        let squares: Vec<Rat> = (0..=3u64)
            .map(|i| Rat::from_integer(&binomial(3, i) * &binomial(3, i)))
            .collect();
        assert_eq!(poly.coefficients, squares);
    }

    #[test]
    fn chain_values_at_three() {
        let (lhs, mid, rhs) = ratio_chain_values(3);
        assert_eq!(lhs, BigInt::from(63));
        assert_eq!(mid, BigInt::from(72));
        assert_eq!(rhs, BigInt::from(512));
    }

    #[test]
    fn bound_audit_simplex_hits_upper() {
        let t3 = standard_simplex::<Rat>(3);
        let report = bound_audit(&t3, &default_grid()).unwrap();
        assert!(report.all_satisfied());
        let row = report.row("difference_body_upper").unwrap();
        match (&row.lhs, &row.rhs) {
            (AuditValue::Rat(l), AuditValue::Rat(r)) => assert_eq!(l, r),
            _ => panic!("wrong value kinds"),
        }
    }

    #[test]
    fn bound_audit_cube_hits_lower() {
        let cube = unit_cube::<Rat>(3);
        let report = bound_audit(&cube, &default_grid()).unwrap();
        assert!(report.all_satisfied());
        let row = report.row("difference_body_lower").unwrap();
        match (&row.lhs, &row.rhs) {
            (AuditValue::Rat(l), AuditValue::Rat(r)) => assert_eq!(l, r),
            _ => panic!("wrong value kinds"),
        }
    }

    #[test]
    fn random_plane_body_is_strict_and_conjecture_holds() {
        let mut rng = crate::geom::seeded_rng(2024);
        let body = random_body(2, 7, &mut rng).unwrap();
        let report = bound_audit(&body, &default_grid()).unwrap();
        assert!(report.all_satisfied());
    }
}
