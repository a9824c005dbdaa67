//! Online packing of squares and cubes into unit bins with harmonic-type
//! classification, plus the analysis machinery that certifies its
//! competitive ratio: exact geometry checks, seventeen case weight
//! functions, an integer-program bound engine, and the counter-example
//! constructions against the earlier algorithm of this family.

pub mod adversary;
pub mod files;
pub mod geometry;
pub mod ip;
pub mod packer;
pub mod params;
mod params_data;
pub mod rat;
pub mod simplex;
pub mod small;
pub mod weights;
