//! Genus-g wild Cantor sets built from ladder curves.
//!
//! The crate builds the planar ladder, its scaffold of short segments and the
//! scaled ladder copies sitting over them, then certifies the distance,
//! intersection, linking and nesting properties the construction relies on.

pub mod geometry;
pub mod ifs;
pub mod ladder;
pub mod maps;
pub mod qfield;
pub mod sequences;
pub mod verify;
