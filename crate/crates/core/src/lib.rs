//! Exact finite computations of point-free Gelfand spectra over posets of
//! contexts.

pub mod algebra;
pub mod aqft;
pub mod bohrify;
pub mod bundle;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod oracle;
pub mod par;
pub mod poset;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
