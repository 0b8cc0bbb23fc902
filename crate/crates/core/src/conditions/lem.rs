use alloc::vec::Vec;

use num_complex::Complex64;

use super::mmatrix::{kappa_from_lambda, m_matrix};
use super::shape::{SchemeShape, StageCoefficients};
use super::taylor::{numeric_word_coefficients, TaylorJob};
use super::{Equation, Limits};
use crate::error::{Error, Result};
use crate::lyndon::{lyndon_words, Word};

/// Largest residual with which a scheme still counts as being of a given
/// order.
pub const ORDER_TOLERANCE: f64 = 1e-10;

/// Lyndon-word coefficients of the `q`-th local error derivative.
pub fn word_residuals(coeffs: &StageCoefficients, q: usize) -> Result<Vec<(Word, Complex64)>> {
    let words = lyndon_words(coeffs.alphabet, q)?;
    let values = numeric_word_coefficients(coeffs, &words);
    Ok(words.into_iter().zip(values).collect())
}

/// Largest order-condition residual over derivative orders `1..=p`.
pub fn order_residual(coeffs: &StageCoefficients, p: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for q in 1..=p {
        for (_, r) in word_residuals(coeffs, q)? {
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}

fn check_order(coeffs: &StageCoefficients, p: usize) -> Result<()> {
    let r = order_residual(coeffs, p)?;
    if !(r <= ORDER_TOLERANCE) {
        return Err(Error::Precondition {
            what: alloc::format!("scheme is not of order {p}"),
            residual: r,
        });
    }
    Ok(())
}

/// Leading error coefficients `λ` of an order-`p` scheme: the residuals of
/// the Lyndon words of length `p + 1`.
pub fn lambda_vector(coeffs: &StageCoefficients, p: usize) -> Result<Vec<Complex64>> {
    check_order(coeffs, p)?;
    Ok(word_residuals(coeffs, p + 1)?
        .into_iter()
        .map(|(_, r)| r)
        .collect())
}

fn norm(v: &[Complex64]) -> f64 {
    libm::sqrt(v.iter().map(Complex64::norm_sqr).sum::<f64>())
}

/// Euclidean norm of the leading error coefficients.
pub fn lem(coeffs: &StageCoefficients, p: usize) -> Result<f64> {
    Ok(norm(&lambda_vector(coeffs, p)?))
}

/// Norm of the leading error in the commutator basis, `‖M⁻¹ λ‖`.
pub fn lem_kappa(coeffs: &StageCoefficients, p: usize) -> Result<f64> {
    let lambda = lambda_vector(coeffs, p)?;
    let m = m_matrix(coeffs.alphabet, p + 1)?;
    Ok(norm(&kappa_from_lambda(&m, &lambda)?))
}

/// Symbolic leading error coefficients of a shape: every Lyndon word of
/// length `p + 1`, without deduplication.
pub fn lem_polynomials(p: usize, shape: &SchemeShape, limits: Limits) -> Result<Vec<Equation>> {
    let q = p + 1;
    limits.check(shape, q)?;
    let job = TaylorJob::new(shape, q, lyndon_words(shape.alphabet(), q)?)?;
    let polys = job.run();
    Ok(job
        .words()
        .iter()
        .cloned()
        .zip(polys)
        .map(|(word, poly)| Equation { word, poly })
        .collect())
}
