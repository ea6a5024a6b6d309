//! Rational lattices: exact determinants, point enumeration, basis reduction.

use num::{BigInt, One, Signed, Zero};

use crate::error::GeomError;
use crate::geom::polytope::{HPolytope, VPolytope};
use crate::geom::to_vrep;
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;
use crate::{Rat, RatMatrix, RatVector};

/// A full-rank lattice spanned by the rows of `basis` over the integers.
#[derive(Clone, PartialEq, Debug)]
pub struct Lattice {
    basis: RatMatrix,
    det_abs: Rat,
}

impl Lattice {
    pub fn new(basis: RatMatrix) -> Result<Self, GeomError> {
        if basis.nrows() != basis.ncols() {
            return Err(GeomError::DimensionMismatch {
                expected: basis.nrows(),
                got: basis.ncols(),
            });
        }
        let det = basis.det();
        if det.is_zero() {
            return Err(GeomError::SingularMatrix);
        }
        Ok(Lattice {
            basis,
            det_abs: det.abs(),
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self, GeomError> {
        Lattice::new(Matrix::from_rows(
            rows.iter().map(|r| Vector::from_ints(r)).collect(),
        ))
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    /// |det(basis)|, the covolume.
    pub fn det(&self) -> &Rat {
        &self.det_abs
    }

    /// The lattice vector with integer coordinates `z` (i.e. `z · basis`).
    pub fn vector_for(&self, z: &[i64]) -> RatVector {
        self.basis.left_mul(&Vector::from_ints(z))
    }

    /// Coordinates of `x` in the basis (solves `z · basis = x`).
    pub fn coords_of(&self, x: &RatVector) -> Result<RatVector, GeomError> {
        self.basis.transpose().solve(x)
    }

    /// Whether `x` lies on the lattice (integer coordinates).
    pub fn contains(&self, x: &RatVector) -> Result<bool, GeomError> {
        Ok(self.coords_of(x)?.0.iter().all(|c| c.denom().is_one()))
    }

    /// Closed fundamental parallelepiped {Σ tᵢ bᵢ : 0 ≤ tᵢ ≤ 1}.
    pub fn fundamental_cell(&self) -> VPolytope<Rat> {
        let n = self.dim();
        let verts = (0..1u32 << n)
            .map(|mask| {
                let mut v: RatVector = Vector::zeros(n);
                for i in 0..n {
                    if mask >> i & 1 == 1 {
                        v = &v + self.basis.row(i);
                    }
                }
                v
            })
            .collect();
        VPolytope::from_vertices_unchecked(n, verts)
    }

    /// The lattice scaled by a nonzero rational factor.
    pub fn scale(&self, s: &Rat) -> Result<Self, GeomError> {
        if s.is_zero() {
            return Err(GeomError::SingularMatrix);
        }
        Lattice::new(Matrix::from_rows(
            self.basis.rows().iter().map(|r| r.scale(s)).collect(),
        ))
    }
}

/// All lattice vectors inside the closed bounded region `h`.
///
/// Exhaustive scan of the integer box bounding the region in lattice
/// coordinates, each candidate tested exactly.
pub fn lattice_points_in(
    h: &HPolytope<Rat>,
    lattice: &Lattice,
) -> Result<Vec<RatVector>, GeomError> {
    let n = lattice.dim();
    if h.dim() != n {
        return Err(GeomError::DimensionMismatch {
            expected: n,
            got: h.dim(),
        });
    }
    let verts = to_vrep(h)?;
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for v in verts.vertices() {
        let z = lattice.coords_of(v)?;
        for i in 0..n {
            lo[i] = lo[i].min(z[i].floor_int());
            let ceil = -(-z[i].clone()).floor_int();
            hi[i] = hi[i].max(ceil);
        }
    }
    let mut found = Vec::new();
    let mut z = lo.clone();
    'scan: loop {
        let point = lattice.vector_for(&z);
        if h.contains(&point)? {
            found.push(point);
        }
        for i in 0..n {
            if z[i] < hi[i] {
                z[i] += 1;
                continue 'scan;
            }
            z[i] = lo[i];
        }
        break;
    }
    Ok(found)
}

/// Pairwise size-reduction sweeps: integer row operations shortening basis
/// rows until stable. The integer span (and |det|) is unchanged.
pub fn unimodular_reduce(basis: &RatMatrix) -> RatMatrix {
    let n = basis.nrows();
    let mut rows: Vec<RatVector> = basis.rows().to_vec();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let denom = rows[j].norm_sq();
                if denom.is_zero() {
                    continue;
                }
                let mu = rows[i].dot(&rows[j]) / denom;
                let k = round_to_int(&mu);
                if k.is_zero() {
                    continue;
                }
                let shifted = &rows[i] - &rows[j].scale(&Rat::from_integer(k));
                if shifted.norm_sq() < rows[i].norm_sq() {
                    rows[i] = shifted;
                    changed = true;
                }
            }
        }
        if !changed {
            return Matrix::from_rows(rows);
        }
    }
}

fn round_to_int(x: &Rat) -> BigInt {
    (x + Rat::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}
