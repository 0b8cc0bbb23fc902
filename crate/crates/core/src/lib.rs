//! Symbolic core for operator-splitting schemes.
//!
//! Order conditions of a splitting scheme
//! `S(h) = exp(h b_s B) exp(h a_s A) ... exp(h b_1 B) exp(h a_1 A)`
//! are obtained by expanding the derivatives of the local error in
//! non-commuting letters and reading off the coefficients of Lyndon words.
//! Everything symbolic is carried out in exact rational arithmetic; floating
//! point only enters when a condition is evaluated at numeric coefficients.
//!
//! The crate is `no_std` and needs only `alloc`. Solvers, time integration,
//! file formats and the command line front end live in the `splitting` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod conditions;
pub mod error;
pub mod eval;
pub mod freealg;
pub mod lyndon;
pub mod schemes;

pub use error::{Error, Result};
pub use num_complex::Complex64;
