use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::freealg::{Subst, Var};
use crate::lyndon::{Alphabet, Letter};

/// Which of the two reduced parameterizations of a symmetric AB scheme is
/// used: the first `A` coefficient or the last `B` coefficient vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetricVariant {
    FirstAZero,
    LastBZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    None,
    /// Stage list reads the same backwards.
    ///
    /// Two letters: `a_1 = 0` or `b_s = 0` and the remaining tuples
    /// palindromic. Three letters: the pattern
    /// `A x1 B x2 C x3 B x4 A x5 ... B x_{4m} A x_{4m+1}` with palindromic
    /// `x`, i.e. `s = 2m + 1` stages where the even stages carry only `B`
    /// (only [`SymmetricVariant::LastBZero`] is accepted).
    Symmetric(SymmetricVariant),
    /// `b_j = a_{s+1-j}`; two letters only.
    Palindromic,
}

/// Stage count, alphabet, symmetry structure and pinned coefficients of an
/// ansatz for which order conditions are generated.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeShape {
    stages: usize,
    alphabet: Alphabet,
    symmetry: Symmetry,
    fixed: Vec<(Var, Complex64)>,
    /// `subst[letter][stage - 1]`
    subst: Vec<Vec<Subst>>,
}

impl SchemeShape {
    pub fn new(stages: usize, alphabet: Alphabet, symmetry: Symmetry) -> Result<Self> {
        if stages == 0 {
            return Err(Error::arg("a scheme needs at least one stage"));
        }
        if stages > 4096 {
            return Err(Error::arg("stage count out of range"));
        }
        let subst = substitution_table(stages, alphabet, symmetry)?;
        Ok(SchemeShape {
            stages,
            alphabet,
            symmetry,
            fixed: Vec::new(),
            subst,
        })
    }

    pub fn generic(stages: usize, alphabet: Alphabet) -> Result<Self> {
        Self::new(stages, alphabet, Symmetry::None)
    }

    /// Pins a coefficient to a numeric value. The value is attached to the
    /// variable that represents `var` under the symmetry substitution.
    pub fn with_fixed(mut self, var: Var, value: Complex64) -> Result<Self> {
        self.check_var(var)?;
        let rep = match self.resolve(var) {
            Subst::Keep => var,
            Subst::Rename(r) => r,
            Subst::Zero => {
                if value.norm() == 0.0 {
                    return Ok(self);
                }
                return Err(Error::arg(alloc::format!(
                    "{var} vanishes by symmetry and cannot be fixed to {value}"
                )));
            }
        };
        if let Some(slot) = self.fixed.iter_mut().find(|(v, _)| *v == rep) {
            if slot.1 != value {
                return Err(Error::arg(alloc::format!(
                    "{var} fixed twice with different values"
                )));
            }
        } else {
            self.fixed.push((rep, value));
            self.fixed.sort_by_key(|&(v, _)| v);
        }
        Ok(self)
    }

    fn check_var(&self, v: Var) -> Result<()> {
        if v.family() >= self.alphabet.size() || v.index() == 0 || v.index() > self.stages {
            return Err(Error::arg(alloc::format!(
                "{v} is not a coefficient of a {}-stage scheme over {} letters",
                self.stages,
                self.alphabet.size()
            )));
        }
        Ok(())
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn fixed(&self) -> &[(Var, Complex64)] {
        &self.fixed
    }

    /// Substitution applied to the coefficient of `letter` in stage `stage`.
    pub fn resolve_coefficient(&self, letter: Letter, stage: usize) -> Subst {
        self.subst[letter as usize][stage - 1]
    }

    pub fn resolve(&self, v: Var) -> Subst {
        if v.family() >= self.alphabet.size() || v.index() == 0 || v.index() > self.stages {
            return Subst::Keep;
        }
        self.resolve_coefficient(v.family(), v.index())
    }

    /// Variable (or zero) the coefficient turns into.
    pub fn representative(&self, letter: Letter, stage: usize) -> Option<Var> {
        match self.resolve_coefficient(letter, stage) {
            Subst::Keep => Some(Var::coefficient(letter, stage)),
            Subst::Rename(v) => Some(v),
            Subst::Zero => None,
        }
    }

    /// Variables that survive the symmetry substitution, in canonical order.
    pub fn representatives(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for letter in self.alphabet.letters() {
            for stage in 1..=self.stages {
                if self.resolve_coefficient(letter, stage) == Subst::Keep {
                    out.push(Var::coefficient(letter, stage));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Representatives that are not pinned: the unknowns of a solve.
    pub fn unknowns(&self) -> Vec<Var> {
        self.representatives()
            .into_iter()
            .filter(|v| !self.fixed.iter().any(|(f, _)| f == v))
            .collect()
    }

    /// Full coefficient table from values of the representatives; pinned
    /// values are taken from the shape.
    pub fn expand(&self, value: impl Fn(Var) -> Complex64) -> StageCoefficients {
        let lookup = |v: Var| {
            self.fixed
                .iter()
                .find(|(f, _)| *f == v)
                .map(|&(_, x)| x)
                .unwrap_or_else(|| value(v))
        };
        let coeffs = self
            .alphabet
            .letters()
            .map(|letter| {
                (1..=self.stages)
                    .map(|stage| match self.representative(letter, stage) {
                        Some(v) => lookup(v),
                        None => Complex64::new(0.0, 0.0),
                    })
                    .collect()
            })
            .collect();
        StageCoefficients {
            alphabet: self.alphabet,
            coeffs,
        }
    }
}

fn substitution_table(
    s: usize,
    alphabet: Alphabet,
    symmetry: Symmetry,
) -> Result<Vec<Vec<Subst>>> {
    let mut table = vec![vec![Subst::Keep; s]; alphabet.size() as usize];
    let mut map = |letter: Letter, stage: usize, target: Option<Var>| {
        let own = Var::coefficient(letter, stage);
        table[letter as usize][stage - 1] = match target {
            None => Subst::Zero,
            Some(v) if v == own => Subst::Keep,
            Some(v) => Subst::Rename(v),
        };
    };
    match (symmetry, alphabet.size()) {
        (Symmetry::None, _) => {}
        (Symmetry::Palindromic, 2) => {
            for j in 1..=s {
                map(1, j, Some(Var::coefficient(0, s + 1 - j)));
            }
        }
        (Symmetry::Palindromic, _) => {
            return Err(Error::Unsupported(
                "palindromic schemes are defined for two operators only".into(),
            ))
        }
        (Symmetry::Symmetric(SymmetricVariant::LastBZero), 2) => {
            for j in 1..=s {
                map(0, j, Some(Var::coefficient(0, j.min(s + 1 - j))));
            }
            for j in 1..s {
                map(1, j, Some(Var::coefficient(1, j.min(s - j))));
            }
            map(1, s, None);
        }
        (Symmetry::Symmetric(SymmetricVariant::FirstAZero), 2) => {
            map(0, 1, None);
            for j in 2..=s {
                map(0, j, Some(Var::coefficient(0, j.min(s + 2 - j))));
            }
            for j in 1..=s {
                map(1, j, Some(Var::coefficient(1, j.min(s + 1 - j))));
            }
        }
        (Symmetry::Symmetric(SymmetricVariant::LastBZero), _) => {
            if s.is_multiple_of(2) {
                return Err(Error::arg(
                    "symmetric three-operator schemes need an odd number of stages",
                ));
            }
            // slot i (1-based) of A B C B | A B C B | ... | A
            let m = (s - 1) / 2;
            let slots = 4 * m + 1;
            let var_of_slot = |i: usize| {
                let block = (i - 1) / 4;
                match (i - 1) % 4 {
                    0 => Var::coefficient(0, 2 * block + 1),
                    1 => Var::coefficient(1, 2 * block + 1),
                    2 => Var::coefficient(2, 2 * block + 1),
                    _ => Var::coefficient(1, 2 * block + 2),
                }
            };
            for letter in 0..3u8 {
                for stage in 1..=s {
                    map(letter, stage, None);
                }
            }
            for i in 1..=slots {
                let own = var_of_slot(i);
                let rep = var_of_slot(i.min(slots + 1 - i));
                map(own.family(), own.index(), Some(rep));
            }
        }
        (Symmetry::Symmetric(SymmetricVariant::FirstAZero), _) => {
            return Err(Error::Unsupported(
                "three-operator symmetric schemes use the A B C B A pattern only".into(),
            ))
        }
    }
    Ok(table)
}

/// Numeric stage coefficients `coeffs[letter][stage - 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StageCoefficients {
    pub alphabet: Alphabet,
    pub coeffs: Vec<Vec<Complex64>>,
}

impl StageCoefficients {
    pub fn from_ab(a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::arg("coefficient lists must be nonempty and of equal length"));
        }
        Ok(StageCoefficients {
            alphabet: Alphabet::AB,
            coeffs: vec![a.to_vec(), b.to_vec()],
        })
    }

    pub fn from_abc(a: &[Complex64], b: &[Complex64], c: &[Complex64]) -> Result<Self> {
        if a.len() != b.len() || a.len() != c.len() || a.is_empty() {
            return Err(Error::arg("coefficient lists must be nonempty and of equal length"));
        }
        Ok(StageCoefficients {
            alphabet: Alphabet::ABC,
            coeffs: vec![a.to_vec(), b.to_vec(), c.to_vec()],
        })
    }

    /// Real coefficients, convenient for tests.
    pub fn real(alphabet: Alphabet, coeffs: &[&[f64]]) -> Result<Self> {
        if coeffs.len() != alphabet.size() as usize {
            return Err(Error::arg("one coefficient list per letter is required"));
        }
        let lists: Vec<Vec<Complex64>> = coeffs
            .iter()
            .map(|l| l.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        let s = lists[0].len();
        if s == 0 || lists.iter().any(|l| l.len() != s) {
            return Err(Error::arg("coefficient lists must be nonempty and of equal length"));
        }
        Ok(StageCoefficients {
            alphabet,
            coeffs: lists,
        })
    }

    pub fn stages(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn get(&self, v: Var) -> Complex64 {
        self.coeffs
            .get(v.family() as usize)
            .and_then(|l| l.get(v.index().wrapping_sub(1)))
            .copied()
            .unwrap_or_default()
    }

    /// Interleaved order `a_1, b_1[, c_1], a_2, ...` used for embedding.
    pub fn interleaved(&self) -> Vec<(Var, Complex64)> {
        let mut out = Vec::new();
        for stage in 1..=self.stages() {
            for letter in self.alphabet.letters() {
                out.push((
                    Var::coefficient(letter, stage),
                    self.coeffs[letter as usize][stage - 1],
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Var {
        Var::parse(s).unwrap()
    }

    #[test]
    fn palindromic_substitution() {
        let sh = SchemeShape::new(3, Alphabet::AB, Symmetry::Palindromic).unwrap();
        assert_eq!(sh.resolve(v("b1")), Subst::Rename(v("a3")));
        assert_eq!(sh.resolve(v("b3")), Subst::Rename(v("a1")));
        assert_eq!(sh.unknowns(), [v("a1"), v("a2"), v("a3")]);
    }

    #[test]
    fn symmetric_variants() {
        let last = SchemeShape::new(4, Alphabet::AB, Symmetry::Symmetric(SymmetricVariant::LastBZero))
            .unwrap();
        assert_eq!(last.resolve(v("b4")), Subst::Zero);
        assert_eq!(last.resolve(v("a4")), Subst::Rename(v("a1")));
        assert_eq!(last.resolve(v("b3")), Subst::Rename(v("b1")));
        assert_eq!(last.unknowns(), [v("a1"), v("a2"), v("b1"), v("b2")]);

        let first =
            SchemeShape::new(3, Alphabet::AB, Symmetry::Symmetric(SymmetricVariant::FirstAZero))
                .unwrap();
        assert_eq!(first.resolve(v("a1")), Subst::Zero);
        assert_eq!(first.resolve(v("a3")), Subst::Rename(v("a2")));
        assert_eq!(first.resolve(v("b3")), Subst::Rename(v("b1")));
        assert_eq!(first.unknowns(), [v("a2"), v("b1"), v("b2")]);
    }

    #[test]
    fn symmetric_three_operator_pattern() {
        let sym = Symmetry::Symmetric(SymmetricVariant::LastBZero);
        // Strang: A x1 B x2 C x3 B x2 A x1
        let sh = SchemeShape::new(3, Alphabet::ABC, sym).unwrap();
        assert_eq!(sh.unknowns(), [v("a1"), v("b1"), v("c1")]);
        assert_eq!(sh.resolve(v("b2")), Subst::Rename(v("b1")));
        assert_eq!(sh.resolve(v("a3")), Subst::Rename(v("a1")));
        assert_eq!(sh.resolve(v("a2")), Subst::Zero);
        assert_eq!(sh.resolve(v("c3")), Subst::Zero);
        assert!(SchemeShape::new(4, Alphabet::ABC, sym).is_err());
        let big = SchemeShape::new(11, Alphabet::ABC, sym).unwrap();
        assert_eq!(big.unknowns().len(), 11);
    }

    #[test]
    fn fixing() {
        let sh = SchemeShape::new(2, Alphabet::AB, Symmetry::None)
            .unwrap()
            .with_fixed(v("a2"), Complex64::new(1.0, 0.0))
            .unwrap();
        assert_eq!(sh.unknowns(), [v("a1"), v("b1"), v("b2")]);
        assert!(sh.clone().with_fixed(v("a3"), Complex64::new(0.0, 0.0)).is_err());
        let pal = SchemeShape::new(2, Alphabet::AB, Symmetry::Palindromic).unwrap();
        let pinned = pal.with_fixed(v("b1"), Complex64::new(0.5, 0.0)).unwrap();
        assert_eq!(pinned.fixed()[0].0, v("a2"));
    }
}
