//! Small dense vectors and matrices over a generic [`Scalar`].
//!
//! Everything here is O(n³) Gaussian elimination on dimensions ≤ 6 plus a
//! homogenizing coordinate, so simplicity wins over cleverness.

use std::ops::{Add, Index, IndexMut, Neg, Sub};

use crate::error::GeomError;
use crate::scalar::Scalar;

/// A point, direction, normal, or lattice vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vector<T>(pub Vec<T>);

impl<T: Scalar> Vector<T> {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![T::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = T::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Vector(self.0.iter().map(|x| x.clone() * s.clone()).collect())
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Append one coordinate (homogenization helper).
    pub fn extended(&self, last: T) -> Self {
        let mut v = self.0.clone();
        v.push(last);
        Vector(v)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Vector<U> {
        Vector(self.0.iter().map(f).collect())
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.to_f64()).collect()
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: Scalar> Add for &Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: &Vector<T>) -> Vector<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(
            self.0
                .iter()
                .zip(rhs.0.iter())
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }
}

impl<T: Scalar> Sub for &Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: &Vector<T>) -> Vector<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(
            self.0
                .iter()
                .zip(rhs.0.iter())
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }
}

impl<T: Scalar> Neg for &Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Vector<T> {
        Vector(self.0.iter().map(|a| -a.clone()).collect())
    }
}

/// Row-major matrix. Lattice bases store generators as rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T> {
    rows: Vec<Vector<T>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: Vec<Vector<T>>) -> Self {
        if let Some(first) = rows.first() {
            debug_assert!(rows.iter().all(|r| r.dim() == first.dim()));
        }
        Matrix { rows }
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            rows: (0..n).map(|i| Vector::unit(n, i)).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vector::dim)
    }

    pub fn rows(&self) -> &[Vector<T>] {
        &self.rows
    }

    pub fn rows_mut(&mut self) -> &mut [Vector<T>] {
        &mut self.rows
    }

    pub fn row(&self, i: usize) -> &Vector<T> {
        &self.rows[i]
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let (n, m) = (self.nrows(), self.ncols());
        Matrix {
            rows: (0..m)
                .map(|j| Vector((0..n).map(|i| self.rows[i][j].clone()).collect()))
                .collect(),
        }
    }

    /// Row vector times matrix: `x · self`.
    pub fn left_mul(&self, x: &Vector<T>) -> Vector<T> {
        debug_assert_eq!(x.dim(), self.nrows());
        let m = self.ncols();
        let mut out: Vector<T> = Vector::zeros(m);
        for (xi, row) in x.0.iter().zip(&self.rows) {
            for j in 0..m {
                out[j] = out[j].clone() + xi.clone() * row[j].clone();
            }
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows.iter().map(|r| r.map(&f)).collect(),
        }
    }

    /// Determinant by fraction-based Gaussian elimination.
    pub fn det(&self) -> T {
        assert_eq!(self.nrows(), self.ncols(), "det of non-square matrix");
        let n = self.nrows();
        let mut a: Vec<Vec<T>> = self.rows.iter().map(|r| r.0.clone()).collect();
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero());
            let Some(p) = pivot else {
                return T::zero();
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let piv = a[col][col].clone();
            det = det * piv.clone();
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone() / piv.clone();
                for c in col..n {
                    let sub = f.clone() * a[col][c].clone();
                    a[r][c] = a[r][c].clone() - sub;
                }
            }
        }
        det
    }

    /// Solve `self · y = rhs` (column convention).
    pub fn solve(&self, rhs: &Vector<T>) -> Result<Vector<T>, GeomError> {
        let n = self.nrows();
        assert_eq!(n, self.ncols());
        assert_eq!(n, rhs.dim());
        let mut a: Vec<Vec<T>> = self
            .rows
            .iter()
            .zip(rhs.0.iter())
            .map(|(r, b)| {
                let mut row = r.0.clone();
                row.push(b.clone());
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(GeomError::SingularMatrix)?;
            a.swap(pivot, col);
            let piv = a[col][col].clone();
            for c in col..=n {
                a[col][c] = a[col][c].clone() / piv.clone();
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in col..=n {
                    let sub = f.clone() * a[col][c].clone();
                    a[r][c] = a[r][c].clone() - sub;
                }
            }
        }
        Ok(Vector(a.into_iter().map(|mut r| r.pop().unwrap()).collect()))
    }

    pub fn inverse(&self) -> Result<Matrix<T>, GeomError> {
        let n = self.nrows();
        let cols: Result<Vec<Vector<T>>, GeomError> = (0..n)
            .map(|j| self.solve(&Vector::unit(n, j)))
            .collect();
        Ok(Matrix::from_rows(cols?).transpose())
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.rows)
    }
}

/// Rank of a set of vectors (Gaussian elimination with exact pivots).
pub fn rank_of<T: Scalar>(vectors: &[Vector<T>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = vectors[0].dim();
    let mut a: Vec<Vec<T>> = vectors.iter().map(|v| v.0.clone()).collect();
    let mut rank = 0;
    for col in 0..m {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let piv = a[rank][col].clone();
        for r in rank + 1..a.len() {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / piv.clone();
            for c in col..m {
                let sub = f.clone() * a[rank][c].clone();
                a[r][c] = a[r][c].clone() - sub;
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Indices of a maximal linearly independent subset, greedily in input order.
pub fn independent_subset<T: Scalar>(vectors: &[Vector<T>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vector<T>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut candidate = basis.clone();
        candidate.push(v.clone());
        if rank_of(&candidate) > basis.len() {
            basis = candidate;
            chosen.push(i);
        }
    }
    chosen
}

/// Affine dimension of a point set (dimension of its affine hull).
pub fn affine_dim<T: Scalar>(points: &[Vector<T>]) -> usize {
    match points.split_first() {
        None => 0,
        Some((p0, rest)) => {
            let diffs: Vec<Vector<T>> = rest.iter().map(|p| p - p0).collect();
            rank_of(&diffs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    type Q = BigRational;

    fn v(coords: &[i64]) -> Vector<Q> {
        Vector::from_ints(coords)
    }

    #[test]
    fn det_and_solve_agree_with_hand_values() {
        let m = Matrix::from_rows(vec![v(&[2, 1]), v(&[1, 2])]);
        assert_eq!(m.det(), Q::from_int(3));
        let sol = m.solve(&v(&[4, 5])).unwrap();
        assert_eq!(sol, Vector(vec![Q::from_int(1), Q::from_int(2)]));
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let m = Matrix::from_rows(vec![v(&[1, 2, 0]), v(&[0, 1, 3]), v(&[4, 0, 1])]);
        let inv = m.inverse().unwrap();
        let mut prod_rows = Vec::new();
        for r in m.rows() {
            prod_rows.push(inv.left_mul(r));
        }
        assert_eq!(Matrix::from_rows(prod_rows), Matrix::identity(3));
    }

    #[test]
    fn rank_counts_independent_rows() {
        let rows = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 0])];
        assert_eq!(rank_of(&rows), 2);
        assert_eq!(independent_subset(&rows), vec![0, 1]);
    }

    #[test]
    fn affine_dim_of_triangle_is_two() {
        let pts = vec![v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[0, 1, 0])];
        assert_eq!(affine_dim(&pts), 2);
    }
}
