//! Explicit pieces of the dynamics: folding isometries, slab regions,
//! winding and degree bookkeeping, the linear part of the Zorich
//! conjugation, and the deformation of the folding lemma.

mod bookkeeping;
mod deformation;
mod isometry;
mod slabs;
mod zorich;

pub use bookkeeping::{
    degree, degree_table, escape_radius, power_radius, power_radius_f64, winding_map, Cylindrical, Power,
};
pub use deformation::{estimate_bilipschitz, sample_pairs, BiLipschitz, Deformation, Part, SurfacePoint};
pub use isometry::{check_folding_invariance, iota, iota1, iota2, iota3, FoldingReport, Isometry};
pub use slabs::{decompose_odd, region_membership, Constraint, OddDecomposition, Placement, SlabRegion};
pub use zorich::{check_conjugation, deck_generators, zorich_linear_inverse, zorich_linear_part};

use crate::sequences::SequenceError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapsError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("{0}")]
    Parameter(String),
    #[error("parameter t = {0} outside [0, 1]")]
    TimeOutOfRange(f64),
}
