//! Vertex- and halfspace-representations of convex polytopes.

use crate::error::GeomError;
use crate::linalg::{affine_dim, Vector};
use crate::scalar::Scalar;

/// Polytope as an irredundant list of extreme points.
///
/// May be lower-dimensional (a segment in the plane, an intersection face);
/// `affine_dim` reports the dimension of the affine hull. Construct through
/// [`crate::geom::convex_hull`] to enforce irredundancy, or through
/// `from_vertices_unchecked` when the caller guarantees it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VPolytope<T> {
    dim: usize,
    vertices: Vec<Vector<T>>,
}

impl<T: Scalar> VPolytope<T> {
    pub fn from_vertices_unchecked(dim: usize, vertices: Vec<Vector<T>>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.iter().all(|v| v.dim() == dim));
        VPolytope { dim, vertices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector<T>] {
        &self.vertices
    }

    pub fn affine_dim(&self) -> usize {
        affine_dim(&self.vertices)
    }

    pub fn is_full_dim(&self) -> bool {
        self.affine_dim() == self.dim
    }

    /// Scale about the origin. Negative factors reflect; zero collapses to
    /// the origin point, a degenerate marker rejected by volume.
    pub fn scale(&self, s: &T) -> Self {
        if s.is_zero() {
            return VPolytope {
                dim: self.dim,
                vertices: vec![Vector::zeros(self.dim)],
            };
        }
        VPolytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.scale(s)).collect(),
        }
    }

    pub fn translate(&self, t: &Vector<T>) -> Self {
        VPolytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v + t).collect(),
        }
    }

    pub fn reflect(&self) -> Self {
        self.scale(&-T::one())
    }

    /// Support value max { dir·x : x in P }.
    pub fn support(&self, dir: &Vector<T>) -> T {
        self.vertices
            .iter()
            .map(|v| dir.dot(v))
            .reduce(|a, b| if b > a { b } else { a })
            .expect("nonempty vertex list")
    }

    /// Component-wise bounding box as (min, max) vectors.
    pub fn bounding_box(&self) -> (Vector<T>, Vector<T>) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            for i in 0..self.dim {
                if v[i] < lo[i] {
                    lo[i] = v[i].clone();
                }
                if v[i] > hi[i] {
                    hi[i] = v[i].clone();
                }
            }
        }
        (lo, hi)
    }

    /// Same vertex set, ignoring order.
    pub fn vertex_set_eq(&self, other: &Self) -> bool
    where
        T: Ord,
    {
        if self.dim != other.dim || self.vertices.len() != other.vertices.len() {
            return false;
        }
        let mut a: Vec<&Vector<T>> = self.vertices.iter().collect();
        let mut b: Vec<&Vector<T>> = other.vertices.iter().collect();
        a.sort_by(|x, y| x.0.cmp(&y.0));
        b.sort_by(|x, y| x.0.cmp(&y.0));
        a == b
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> VPolytope<U> {
        VPolytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.map(&f)).collect(),
        }
    }
}

/// One closed halfspace `normal · x <= offset`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Halfspace<T> {
    pub normal: Vector<T>,
    pub offset: T,
}

impl<T: Scalar> Halfspace<T> {
    pub fn contains(&self, x: &Vector<T>) -> bool {
        self.normal.dot(x) <= self.offset
    }

    /// Slack `offset - normal·x`; negative outside, zero on the hyperplane.
    pub fn slack(&self, x: &Vector<T>) -> T {
        self.offset.clone() - self.normal.dot(x)
    }

    /// The same halfspace translated by `t`.
    pub fn translate(&self, t: &Vector<T>) -> Self {
        Halfspace {
            normal: self.normal.clone(),
            offset: self.offset.clone() + self.normal.dot(t),
        }
    }
}

/// Polytope as an irredundant list of facet halfspaces. Always bounded and
/// full-dimensional when produced by [`crate::geom::to_hrep`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HPolytope<T> {
    dim: usize,
    halfspaces: Vec<Halfspace<T>>,
}

impl<T: Scalar> HPolytope<T> {
    pub fn from_halfspaces_unchecked(dim: usize, halfspaces: Vec<Halfspace<T>>) -> Self {
        debug_assert!(halfspaces.iter().all(|h| h.normal.dim() == dim));
        HPolytope { dim, halfspaces }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace<T>] {
        &self.halfspaces
    }

    /// Closed containment: boundary counts as inside.
    pub fn contains(&self, x: &Vector<T>) -> Result<bool, GeomError> {
        if x.dim() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        Ok(self.halfspaces.iter().all(|h| h.contains(x)))
    }

    pub fn translate(&self, t: &Vector<T>) -> Self {
        HPolytope {
            dim: self.dim,
            halfspaces: self.halfspaces.iter().map(|h| h.translate(t)).collect(),
        }
    }

    /// Halfspaces of the scaled body `s·P` for `s > 0`.
    pub fn scale(&self, s: &T) -> Self {
        debug_assert!(s.is_positive());
        HPolytope {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace {
                    normal: h.normal.clone(),
                    offset: h.offset.clone() * s.clone(),
                })
                .collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> HPolytope<U> {
        HPolytope {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace {
                    normal: h.normal.map(&f),
                    offset: f(&h.offset),
                })
                .collect(),
        }
    }
}
