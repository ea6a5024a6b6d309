//! Lattice coverings: certified verification, density, star numbers, and
//! the per-instance lemma audits.

pub mod audit;
pub mod homothety;
pub mod multiplicity;
pub mod verify;

pub use audit::{hadwiger_audit, theorem2_audit};
pub use homothety::{boundary_overlap, homothety_check, Homothety};
pub use multiplicity::{multiplicity_density_estimate, MultiplicityEstimate};
pub use verify::{
    candidate_translates, density, grid_covering_oracle, is_covering, min_cover_scale,
    star_number, star_number_oracle, subdivide_cell, CoveringCertificate, DyadicBox,
    ScaleBracket, SubdivisionOutcome, Verdict,
};
