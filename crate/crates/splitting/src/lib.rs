//! Order conditions, solvers and integrators for operator splitting schemes.
//!
//! The symbolic core lives in `splitting-core`; this crate adds parallel
//! generation, numerical solving, time integration and file formats.

pub mod cli;
pub mod dd;
pub mod error;
pub mod generate;
pub mod integrate;
pub mod io;
pub mod linalg;
pub mod solve;

pub use error::{Error, Result};
pub use splitting_core as core;
