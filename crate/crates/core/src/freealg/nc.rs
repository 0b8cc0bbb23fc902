use alloc::collections::BTreeMap;
use core::fmt;

use num_traits::One;

use super::coef::{CoefPoly, Rational};
use crate::error::{Error, Result};
use crate::lyndon::{Alphabet, Bracket, Letter, Word};

/// Element of the free associative algebra over `A, B[, C]` whose scalars are
/// commutative polynomials in the scheme coefficients.
///
/// Entries are kept sorted by word so iteration and printing are
/// deterministic; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCPoly {
    alphabet: Alphabet,
    terms: BTreeMap<Word, CoefPoly>,
}

impl NCPoly {
    pub fn zero(alphabet: Alphabet) -> Self {
        NCPoly {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    /// The empty word with coefficient one.
    pub fn one(alphabet: Alphabet) -> Self {
        let mut p = Self::zero(alphabet);
        p.add_term(Word::empty(), CoefPoly::one());
        p
    }

    pub fn letter(alphabet: Alphabet, l: Letter) -> Result<Self> {
        Self::monomial(alphabet, Word::letter(l), CoefPoly::one())
    }

    pub fn monomial(alphabet: Alphabet, w: Word, c: CoefPoly) -> Result<Self> {
        if !w.fits(alphabet) {
            return Err(Error::arg(alloc::format!(
                "word {w} does not fit a {}-letter alphabet",
                alphabet.size()
            )));
        }
        let mut p = Self::zero(alphabet);
        p.add_term(w, c);
        Ok(p)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Entries in increasing lexicographic order of the words.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CoefPoly)> {
        self.terms.iter()
    }

    /// Coefficient of `w`, zero when absent.
    pub fn coefficient_of(&self, w: &Word) -> CoefPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Lexicographically smallest word carrying a nonzero coefficient.
    pub fn leading(&self) -> Option<(&Word, &CoefPoly)> {
        self.terms.iter().next()
    }

    pub(crate) fn add_term(&mut self, w: Word, c: CoefPoly) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &NCPoly) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.size(),
                right: other.alphabet.size(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn sub(&self, other: &NCPoly) -> Result<NCPoly> {
        self.add(&other.scale(&CoefPoly::integer(-1)))
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &NCPoly) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    /// Concatenates words, multiplies their commuting coefficients.
    pub fn mul(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check(other)?;
        let mut out = NCPoly::zero(self.alphabet);
        for (u, x) in &self.terms {
            for (v, y) in &other.terms {
                out.add_term(u.concat(v), x.mul(y));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CoefPoly) -> NCPoly {
        let mut out = NCPoly::zero(self.alphabet);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x.mul(c));
        }
        out
    }

    pub fn scale_rational(&self, r: Rational) -> NCPoly {
        self.scale(&CoefPoly::constant(r))
    }

    /// Keeps only the words of the given length.
    pub fn homogeneous_part(&self, len: usize) -> NCPoly {
        NCPoly {
            alphabet: self.alphabet,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == len)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops words longer than `len`.
    pub fn truncated(&self, len: usize) -> NCPoly {
        NCPoly {
            alphabet: self.alphabet,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= len)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Commutator `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &NCPoly) -> Result<NCPoly> {
        self.mul(other)?.sub(&other.mul(self)?)
    }
}

/// Expands a nested commutator into words, recursively by
/// `[X, Y] = XY − YX`.
pub fn expand_commutator(t: &Bracket, alphabet: Alphabet) -> Result<NCPoly> {
    match t {
        Bracket::Leaf(l) => NCPoly::letter(alphabet, *l),
        Bracket::Commutator(x, y) => {
            let x = expand_commutator(x, alphabet)?;
            let y = expand_commutator(y, alphabet)?;
            x.commutator(&y)
        }
    }
}

impl fmt::Display for NCPoly {
    /// `(c1)*W1 + (c2)*W2 ...`, words in increasing order; integer
    /// coefficients are printed bare.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let bare = c.len() == 1 && c.terms().all(|(m, _)| m.degree() == 0);
            if bare {
                let r = c.constant_term();
                if r.is_one() {
                    write!(f, "{w}")?;
                } else {
                    write!(f, "({c})*{w}")?;
                }
            } else {
                write!(f, "({c})*{w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::coef::poly;
    use crate::lyndon::{standard_bracketing, A, B};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn ab(s: &[(&str, i128)]) -> NCPoly {
        let mut p = NCPoly::zero(Alphabet::AB);
        for (word, c) in s {
            p.add_term(w(word), CoefPoly::integer(*c));
        }
        p
    }

    #[test]
    fn products() {
        let a = NCPoly::letter(Alphabet::AB, A).unwrap();
        let b = NCPoly::letter(Alphabet::AB, B).unwrap();
        assert_eq!(a.mul(&b).unwrap(), ab(&[("AB", 1)]));
        let s = a.add(&b).unwrap();
        assert_eq!(
            s.mul(&s).unwrap(),
            ab(&[("AA", 1), ("AB", 1), ("BA", 1), ("BB", 1)])
        );
    }

    #[test]
    fn symbolic_product() {
        let lin = |x: &str, y: &str| {
            let mut p = NCPoly::zero(Alphabet::AB);
            p.add_term(w("A"), poly(x));
            p.add_term(w("B"), poly(y));
            p
        };
        let prod = lin("a2", "b2").mul(&lin("a1", "b1")).unwrap();
        assert_eq!(prod.coefficient_of(&w("AA")), poly("a1*a2"));
        assert_eq!(prod.coefficient_of(&w("AB")), poly("a2*b1"));
        assert_eq!(prod.coefficient_of(&w("BA")), poly("a1*b2"));
        assert_eq!(prod.coefficient_of(&w("BB")), poly("b1*b2"));
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let a = NCPoly::letter(Alphabet::AB, A).unwrap();
        let c = NCPoly::letter(Alphabet::ABC, A).unwrap();
        assert!(matches!(a.mul(&c), Err(Error::AlphabetMismatch { .. })));
        assert!(a.add(&c).is_err());
        assert!(NCPoly::letter(Alphabet::AB, 2).is_err());
    }

    #[test]
    fn commutator_expansions() {
        let e = |s: &str| {
            expand_commutator(&standard_bracketing(&w(s)).unwrap(), Alphabet::AB).unwrap()
        };
        assert_eq!(e("AB"), ab(&[("AB", 1), ("BA", -1)]));
        assert_eq!(e("AAB"), ab(&[("AAB", 1), ("ABA", -2), ("BAA", 1)]));
        assert_eq!(e("AAB").coefficient_of(&w("AAB")), CoefPoly::one());
        assert!(e("AB").coefficient_of(&w("BB")).is_zero());
        assert_eq!(e("AAABB").coefficient_of(&w("AABAB")), CoefPoly::integer(-2));
    }

    #[test]
    fn display() {
        assert_eq!(alloc::format!("{}", ab(&[("AB", 1), ("BA", -1)])), "AB + (-1)*BA");
    }
}
