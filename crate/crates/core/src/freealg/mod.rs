//! Exact non-commutative polynomial arithmetic.
//!
//! [`CoefPoly`] is a commutative polynomial in the scheme coefficients with
//! rational coefficients; [`NCPoly`] maps words over `A, B[, C]` to such
//! polynomials.

mod coef;
mod nc;

pub use coef::{poly, CoefPoly, Monomial, Rational, Subst, Var};
pub use nc::{expand_commutator, NCPoly};
