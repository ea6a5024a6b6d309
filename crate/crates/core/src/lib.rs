//! Exact rational polytope geometry, generalized difference bodies, and
//! certified lattice coverings by simplices.
//!
//! The geometry kernel (`geom`, `linalg`) is generic over a [`Scalar`] type;
//! every certified computation instantiates it at arbitrary-precision
//! rationals, while the lattice-search heuristics reuse the same code at
//! `f64`. Floats never decide a certificate.

pub mod error;
pub mod linalg;
pub mod ratext;
pub mod scalar;

pub mod cover;
pub mod diffbody;
pub mod geom;
pub mod io;
pub mod lattice;
pub mod optim;
pub mod report;

pub use error::{CoverError, GeomError, OptimError};
pub use lattice::{lattice_points_in, unimodular_reduce, Lattice};
pub use scalar::Scalar;

/// Exact scalar used on all certified paths.
pub type Rat = num::BigRational;
/// Exact integer type backing [`Rat`].
pub type Int = num::BigInt;

pub type RatVector = linalg::Vector<Rat>;
pub type RatMatrix = linalg::Matrix<Rat>;
pub type RatVPolytope = geom::VPolytope<Rat>;
pub type RatHPolytope = geom::HPolytope<Rat>;
