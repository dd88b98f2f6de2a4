pub mod brauer;
pub mod config;
pub mod error;
pub mod family;
pub mod lattice;
pub mod linalg;
pub mod overlattice;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
