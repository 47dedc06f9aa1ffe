//! Wild horseshoe toolkit: the affine horseshoe with a quadratic homoclinic
//! tangency, its bridge and gap combinatorics, the linking and critical-chain
//! constructions, wandering rectangles and orbit statistics.

pub mod cantor;
pub mod construction;
pub mod core_map;
pub mod error;
pub mod scalar;
pub mod statistics;
pub mod symbolic;

pub use error::{Error, Result};
