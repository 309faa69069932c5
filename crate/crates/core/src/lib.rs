//! Exact computations with torus-valued cochains on free abelian groups,
//! their modulus extensions and Heisenberg extensions.

pub mod atlas;
pub mod error;
pub mod groups;
pub mod hjr;
pub mod lattice;
pub mod cochain;
pub mod engine;
pub mod families;
pub mod num;
pub mod poly;
pub mod resolution;
pub mod sample;
pub mod verify;

pub use error::{AtlasError, Result};
