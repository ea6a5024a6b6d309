//! Double-description method for pointed polyhedral cones.
//!
//! Given rows `r` defining the cone `{x : r·x <= 0}`, computes the extreme
//! rays together with their tight-constraint sets. Works over any [`Scalar`],
//! but only exact scalars give reliable results; all certified callers use
//! rationals. Incremental insertion with the combinatorial adjacency test
//! handles degenerate (non-simplicial) cones without perturbation.

use crate::error::GeomError;
use crate::linalg::{independent_subset, Matrix, Vector};
use crate::scalar::Scalar;

/// Dense bitset sized at construction; used for tight-constraint sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersection(&self, other: &Self) -> Self {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter_map(move |b| {
                if w >> b & 1 == 1 {
                    Some(wi * 64 + b)
                } else {
                    None
                }
            })
        })
    }

    pub fn any(&self) -> bool {
        self.words.iter().any(|&w| w != 0)
    }
}

/// An extreme ray of the cone plus the set of input rows tight at it.
#[derive(Clone, Debug)]
pub struct Ray<T> {
    pub dir: Vector<T>,
    pub tight: BitSet,
}

/// Extreme rays of `{x in R^d : rows[i]·x <= 0 for all i}`.
///
/// Requires the row matrix to have full column rank `d`, which makes the cone
/// pointed; callers map rank deficiency to their own degenerate/unbounded
/// errors via [`GeomError::SingularMatrix`].
pub fn extreme_rays<T: Scalar>(rows: &[Vector<T>]) -> Result<Vec<Ray<T>>, GeomError> {
    let d = rows.first().map(Vector::dim).unwrap_or(0);
    let m = rows.len();
    let seed = independent_subset(rows);
    if seed.len() < d {
        return Err(GeomError::SingularMatrix);
    }

    // Initial simplicial cone from d independent rows: generators are the
    // columns of -B^{-1}, each tight on all seed rows but one.
    let seed_mat = Matrix::from_rows(seed.iter().map(|&i| rows[i].clone()).collect());
    let inv = seed_mat.inverse()?;
    let mut rays: Vec<Ray<T>> = Vec::with_capacity(d);
    let inv_t = inv.transpose();
    for j in 0..d {
        let mut dir = -inv_t.row(j);
        T::canonicalize_direction(&mut dir.0);
        let mut tight = BitSet::new(m);
        for (k, &row_idx) in seed.iter().enumerate() {
            if k != j {
                tight.insert(row_idx);
            }
        }
        rays.push(Ray { dir, tight });
    }

    let mut processed = BitSet::new(m);
    for &i in &seed {
        processed.insert(i);
    }

    for k in 0..m {
        if processed.contains(k) {
            continue;
        }
        processed.insert(k);
        let row = &rows[k];
        let values: Vec<T> = rays.iter().map(|r| row.dot(&r.dir)).collect();
        let has_pos = values.iter().any(|v| v.is_positive());
        if !has_pos {
            for (ray, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    ray.tight.insert(k);
                }
            }
            continue;
        }

        let mut new_rays: Vec<Ray<T>> = Vec::new();
        for (pi, vp) in values.iter().enumerate() {
            if !vp.is_positive() {
                continue;
            }
            for (ni, vn) in values.iter().enumerate() {
                if !vn.is_negative() {
                    continue;
                }
                if !adjacent(&rays, pi, ni, &processed, d) {
                    continue;
                }
                // vp·dir_n - vn·dir_p: tight on row k, feasible for the rest.
                let mut dir = &rays[ni].dir.scale(vp) - &rays[pi].dir.scale(vn);
                T::canonicalize_direction(&mut dir.0);
                let mut tight = BitSet::new(m);
                for idx in processed.iter_ones() {
                    if rows[idx].dot(&dir).is_zero() {
                        tight.insert(idx);
                    }
                }
                new_rays.push(Ray { dir, tight });
            }
        }

        let mut kept: Vec<Ray<T>> = Vec::with_capacity(rays.len());
        for (ray, v) in rays.into_iter().zip(values) {
            if v.is_positive() {
                continue;
            }
            let mut ray = ray;
            if v.is_zero() {
                ray.tight.insert(k);
            }
            kept.push(ray);
        }
        kept.extend(new_rays);
        rays = kept;
    }

    Ok(rays)
}

/// Combinatorial adjacency: rays `p`, `n` span a 2-face iff no other extreme
/// ray's tight set contains their common tight set (restricted to processed
/// rows, which is how `tight` is maintained).
fn adjacent<T: Scalar>(
    rays: &[Ray<T>],
    p: usize,
    n: usize,
    _processed: &BitSet,
    d: usize,
) -> bool {
    let common = rays[p].tight.intersection(&rays[n].tight);
    if d >= 2 && common.count() + 2 < d {
        return false;
    }
    for (i, other) in rays.iter().enumerate() {
        if i == p || i == n {
            continue;
        }
        if common.is_subset_of(&other.tight) {
            return false;
        }
    }
    true
}
