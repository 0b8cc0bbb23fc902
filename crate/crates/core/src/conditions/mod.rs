//! Order conditions as polynomial systems.

mod composition;
mod lem;
mod mmatrix;
mod shape;
mod taylor;

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::freealg::{CoefPoly, Var};
use crate::lyndon::{lyndon_words, Word};

pub use composition::{composition_system, CompositionShape, WEIGHT_LETTERS};
pub use lem::{
    lambda_vector, lem, lem_kappa, lem_polynomials, order_residual, word_residuals,
    ORDER_TOLERANCE,
};
pub use mmatrix::{kappa_from_lambda, lie_coordinates, m_matrix};
pub use shape::{SchemeShape, StageCoefficients, Symmetry, SymmetricVariant};
pub use taylor::{
    composition_count, numeric_word_coefficients, taylor_derivative, Compositions, TaylorJob,
    TaylorPartial, MAX_DERIVATIVE,
};

/// One polynomial condition together with the Lyndon word it was read from.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub word: Word,
    pub poly: CoefPoly,
}

impl Equation {
    /// Derivative order the equation belongs to.
    pub fn order(&self) -> usize {
        self.word.len()
    }
}

/// An equation removed while assembling a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Merge {
    pub dropped: Word,
    /// Equation it coincides with (up to sign); `None` if it vanished.
    pub kept: Option<Word>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Origin {
    Splitting(SchemeShape),
    Composition(CompositionShape),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    pub order: usize,
    pub origin: Origin,
    pub equations: Vec<Equation>,
    pub merged: Vec<Merge>,
}

impl PolySystem {
    pub fn unknowns(&self) -> Vec<Var> {
        match &self.origin {
            Origin::Splitting(s) => s.unknowns(),
            Origin::Composition(c) => c.unknowns(),
        }
    }

    pub fn fixed(&self) -> Vec<(Var, Complex64)> {
        match &self.origin {
            Origin::Splitting(s) => s.fixed().to_vec(),
            Origin::Composition(_) => Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.equations.len() == self.unknowns().len()
    }

    pub fn polynomials(&self) -> Vec<CoefPoly> {
        self.equations.iter().map(|e| e.poly.clone()).collect()
    }

    /// Number of equations per derivative order `1..=order`.
    pub fn counts_by_order(&self) -> Vec<usize> {
        let mut out = alloc::vec![0; self.order];
        for e in &self.equations {
            if let Some(c) = out.get_mut(e.order() - 1) {
                *c += 1;
            }
        }
        out
    }

    /// Adds an equation unless it vanishes or repeats an earlier one up to
    /// sign.
    pub(crate) fn push_dedup(&mut self, word: Word, poly: CoefPoly) {
        if poly.is_zero() {
            self.merged.push(Merge {
                dropped: word,
                kept: None,
            });
            return;
        }
        let neg = poly.neg();
        if let Some(prev) = self
            .equations
            .iter()
            .find(|e| e.poly == poly || e.poly == neg)
        {
            self.merged.push(Merge {
                dropped: word,
                kept: Some(prev.word.clone()),
            });
            return;
        }
        self.equations.push(Equation { word, poly });
    }
}

/// Resource limits for condition generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Longest word generated over three letters.
    pub max_abc_length: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_abc_length: 7 }
    }
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits {
            max_abc_length: MAX_DERIVATIVE,
        }
    }

    pub fn check(&self, shape: &SchemeShape, q: usize) -> Result<()> {
        if shape.alphabet().size() == 3 && q > self.max_abc_length {
            return Err(Error::arg(alloc::format!(
                "three-operator words of length {q} exceed the limit of {}; raise the limit explicitly",
                self.max_abc_length
            )));
        }
        if q > MAX_DERIVATIVE {
            return Err(Error::arg("derivative order too large"));
        }
        Ok(())
    }
}

/// Derivative orders that produce conditions for an order-`p` scheme.
pub fn condition_orders(p: usize, shape: &SchemeShape) -> impl Iterator<Item = usize> {
    let odd_only = matches!(shape.symmetry(), Symmetry::Symmetric(_));
    (1..=p).filter(move |q| !odd_only || q % 2 == 1)
}

/// Conditions for order `p`: Lyndon-word coefficients of the local error
/// derivatives up to `p`. Symmetric shapes only need odd orders; for
/// palindromic shapes, equations repeating an earlier one (the twins) are
/// dropped and listed in [`PolySystem::merged`].
pub fn order_conditions(p: usize, shape: &SchemeShape) -> Result<PolySystem> {
    order_conditions_with(p, shape, Limits::default())
}

pub fn order_conditions_with(p: usize, shape: &SchemeShape, limits: Limits) -> Result<PolySystem> {
    let mut jobs = Vec::new();
    for q in condition_orders(p, shape) {
        limits.check(shape, q)?;
        jobs.push(TaylorJob::new(shape, q, lyndon_words(shape.alphabet(), q)?)?);
    }
    let results = jobs.iter().map(TaylorJob::run).collect();
    Ok(assemble(p, shape, &jobs, results))
}

/// Builds a system from finished jobs, one result vector per job.
pub fn assemble(
    p: usize,
    shape: &SchemeShape,
    jobs: &[TaylorJob<'_>],
    results: Vec<Vec<CoefPoly>>,
) -> PolySystem {
    let mut sys = PolySystem {
        order: p,
        origin: Origin::Splitting(shape.clone()),
        equations: Vec::new(),
        merged: Vec::new(),
    };
    let dedup = shape.symmetry() == Symmetry::Palindromic;
    for (job, polys) in jobs.iter().zip(results) {
        for (w, poly) in job.words().iter().zip(polys) {
            if dedup {
                sys.push_dedup(w.clone(), poly);
            } else {
                sys.equations.push(Equation {
                    word: w.clone(),
                    poly,
                });
            }
        }
    }
    sys
}

/// Shape of a worker scheme sharing the first `prefix` coefficients (in the
/// order `a_1, b_1[, c_1], a_2, ...`) with `controller`.
pub fn embedded_worker_shape(
    controller: &StageCoefficients,
    prefix: usize,
    worker_stages: usize,
) -> Result<SchemeShape> {
    let list = controller.interleaved();
    if prefix > list.len() {
        return Err(Error::arg("shared prefix longer than the controller"));
    }
    let mut shape = SchemeShape::generic(worker_stages, controller.alphabet)?;
    for &(v, x) in &list[..prefix] {
        shape = shape.with_fixed(v, x)?;
    }
    Ok(shape)
}
