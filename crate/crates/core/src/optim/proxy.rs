//! Float search proxy: approximate minimal covering scale for a basis.
//!
//! Reuses the generic subdivision engine at `f64` with a support-function
//! candidate box. Heuristic only: every reported optimum is re-certified by
//! the exact verifier before anything depends on it.

use crate::cover::verify::subdivide_cell;
use crate::geom::polytope::HPolytope;
use crate::linalg::{Matrix, Vector};

pub struct FloatBody {
    /// Unit-scale H-rep (normals, offsets); scaling multiplies offsets.
    pub hrep: HPolytope<f64>,
    pub vertices: Vec<Vector<f64>>,
    pub volume: f64,
}

/// Whether `scale·K + Λ(basis)` covers, approximately.
pub fn covers_at_scale(body: &FloatBody, basis: &Matrix<f64>, scale: f64, depth: u32) -> bool {
    let n = basis.nrows();
    let det = basis.det().abs();
    if !det.is_finite() || det < 1e-9 {
        return false;
    }
    if body.volume * scale.powi(n as i32) < det * (1.0 - 1e-9) {
        return false;
    }
    let Ok(inv) = basis.inverse() else {
        return false;
    };
    let scaled_h = body.hrep.scale(&scale);
    let scaled_verts: Vec<Vector<f64>> = body.vertices.iter().map(|v| v.scale(&scale)).collect();

    // Integer box in lattice coordinates bounding P − scale·K.
    let cell_verts: Vec<Vector<f64>> = (0..1u32 << n)
        .map(|mask| {
            let mut v: Vector<f64> = Vector::zeros(n);
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    v = &v + basis.row(i);
                }
            }
            v
        })
        .collect();
    let support = |dir: &Vector<f64>| -> f64 {
        let hp = cell_verts
            .iter()
            .map(|v| v.dot(dir))
            .fold(f64::NEG_INFINITY, f64::max);
        let hk = scaled_verts
            .iter()
            .map(|v| -v.dot(dir))
            .fold(f64::NEG_INFINITY, f64::max);
        hp + hk
    };
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    let inv_cols = inv.transpose();
    for i in 0..n {
        let col = inv_cols.row(i);
        let max = support(col);
        let min = -support(&-col);
        lo[i] = (min - 1e-9).floor() as i64;
        hi[i] = (max + 1e-9).ceil() as i64;
        if hi[i] - lo[i] > 400 {
            return false; // degenerate sliver basis; treat as infeasible
        }
    }
    let mut translates: Vec<HPolytope<f64>> = Vec::new();
    let mut idx = lo.clone();
    'scan: loop {
        let u = basis.left_mul(&Vector(idx.iter().map(|&k| k as f64).collect()));
        translates.push(scaled_h.translate(&u));
        if translates.len() > 4000 {
            return false;
        }
        for i in 0..n {
            if idx[i] < hi[i] {
                idx[i] += 1;
                continue 'scan;
            }
            idx[i] = lo[i];
        }
        break;
    }
    let outcome = subdivide_cell(basis, &translates, depth);
    outcome.all_accepted
}

/// Approximate minimal covering scale by growth + bisection; `None` when no
/// bracketing covered scale is found.
pub fn approx_cover_scale(
    body: &FloatBody,
    basis: &Matrix<f64>,
    depth: u32,
    rel_tol: f64,
) -> Option<f64> {
    let n = basis.nrows();
    let det = basis.det().abs();
    if !det.is_finite() || det < 1e-9 {
        return None;
    }
    // Volume lower bound for the starting scale.
    let mut hi = (det / body.volume).powf(1.0 / n as f64).max(1e-3);
    let mut lo = hi * 0.5;
    let mut grew = 0;
    while !covers_at_scale(body, basis, hi, depth) {
        lo = hi;
        hi *= 1.3;
        grew += 1;
        if grew > 40 {
            return None;
        }
    }
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if covers_at_scale(body, basis, mid, depth) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}
