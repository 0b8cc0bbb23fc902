//! Conditions on the weights of a symmetric composition
//! `S(ω_m h) ... S(ω_1 h)` of a symmetric second-order base method `S`.
//!
//! `S(h) = exp(h Y_1 + h^3 Y_3 + h^5 Y_5 + ...)` with `Y_1 = A + B`; the
//! letters `A, B, C` below stand for `Y_1, Y_3, Y_5`, carrying weights
//! 1, 3, 5 in powers of `h`. The composition has order `r` when the Lyndon
//! coefficients of every odd weight below `r` vanish. Weights are
//! palindromic, `ω_μ = ω_{m+1−μ}`, with unknowns `w_1, ..., w_{(m+1)/2}`.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::One;

use super::{Origin, PolySystem};
use crate::error::{Error, Result};
use crate::freealg::{CoefPoly, NCPoly, Rational, Var};
use crate::lyndon::{lyndon_words, Alphabet, Letter, Word};

/// Weight in powers of `h` of the letters `A, B, C`.
pub const WEIGHT_LETTERS: [usize; 3] = [1, 3, 5];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompositionShape {
    stages: usize,
    target_order: usize,
}

impl CompositionShape {
    pub fn new(stages: usize, target_order: usize) -> Result<Self> {
        if stages == 0 || stages.is_multiple_of(2) {
            return Err(Error::arg("symmetric compositions need an odd number of stages"));
        }
        if !matches!(target_order, 2 | 4 | 6) {
            return Err(Error::Unsupported(
                "composition weights are available for orders 2, 4 and 6".into(),
            ));
        }
        Ok(CompositionShape {
            stages,
            target_order,
        })
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn target_order(&self) -> usize {
        self.target_order
    }

    pub fn unknowns(&self) -> Vec<Var> {
        (1..=self.stages.div_ceil(2)).map(Var::weight).collect()
    }

    fn weight_var(&self, mu: usize) -> Var {
        Var::weight(mu.min(self.stages + 1 - mu))
    }

    /// Full weight vector `ω_1, ..., ω_m` from the unknowns.
    pub fn expand(&self, w: &[Complex64]) -> Result<Vec<Complex64>> {
        if w.len() != self.stages.div_ceil(2) {
            return Err(Error::arg("wrong number of weights"));
        }
        Ok((1..=self.stages)
            .map(|mu| w[self.weight_var(mu).index() - 1])
            .collect())
    }
}

fn weight(w: &Word) -> usize {
    w.letters().iter().map(|&l| WEIGHT_LETTERS[l as usize]).sum()
}

fn drop_heavy(p: &NCPoly, max: usize) -> NCPoly {
    let mut out = NCPoly::zero(p.alphabet());
    for (w, c) in p.terms() {
        if weight(w) <= max {
            out.add_term(w.clone(), c.clone());
        }
    }
    out
}

fn factor(var: Var, max: usize) -> Result<NCPoly> {
    let mut x = NCPoly::zero(Alphabet::ABC);
    for (l, &wt) in WEIGHT_LETTERS.iter().enumerate() {
        if wt <= max {
            x.add_term(Word::letter(l as Letter), CoefPoly::var(var).pow(wt as u32));
        }
    }
    let mut out = NCPoly::one(Alphabet::ABC);
    let mut power = NCPoly::one(Alphabet::ABC);
    let mut fact = Rational::one();
    for n in 1..=max {
        power = drop_heavy(&power.mul(&x)?, max);
        fact *= Rational::from_integer(n as i128);
        out = out.add(&power.scale_rational(fact.recip()))?;
    }
    Ok(out)
}

pub fn composition_system(shape: &CompositionShape) -> Result<PolySystem> {
    let max = shape.target_order - 1;
    let mut product = NCPoly::one(Alphabet::ABC);
    for mu in (1..=shape.stages).rev() {
        product = drop_heavy(&product.mul(&factor(shape.weight_var(mu), max)?)?, max);
    }
    let mut sys = PolySystem {
        order: shape.target_order,
        origin: Origin::Composition(*shape),
        equations: Vec::new(),
        merged: Vec::new(),
    };
    for q in (1..shape.target_order).step_by(2) {
        let mut fact = Rational::one();
        for i in 1..=q {
            fact *= Rational::from_integer(i as i128);
        }
        for len in 1..=q {
            for w in lyndon_words(Alphabet::ABC, len)? {
                if weight(&w) != q {
                    continue;
                }
                let mut c = product.coefficient_of(&w);
                if w.letters() == [0] {
                    c = c.sub(&CoefPoly::one());
                }
                sys.equations.push(super::Equation {
                    word: w,
                    poly: c.scale(&fact),
                });
            }
        }
    }
    Ok(sys)
}
