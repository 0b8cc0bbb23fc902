use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::freealg::{expand_commutator, CoefPoly, NCPoly, Rational};
use crate::lyndon::{lyndon_words, standard_bracketing, Alphabet, Word};

/// `M[k][j]`: coefficient of the `k`-th Lyndon word of length `q` in the
/// expansion of the standard bracketing of the `j`-th one.
///
/// Words are in increasing lexicographic order. A Lyndon word is the
/// smallest word of its own bracketing and appears there with coefficient
/// one, so `M` is unit lower triangular.
pub fn m_matrix(alphabet: Alphabet, q: usize) -> Result<Vec<Vec<Rational>>> {
    let words = lyndon_words(alphabet, q)?;
    let n = words.len();
    let mut m = alloc::vec![alloc::vec![Rational::zero(); n]; n];
    for (j, wj) in words.iter().enumerate() {
        let k_j = expand_commutator(&standard_bracketing(wj)?, alphabet)?;
        for (k, wk) in words.iter().enumerate() {
            m[k][j] = k_j.coefficient_of(wk).constant_term();
        }
    }
    Ok(m)
}

/// Solves `M κ = λ` by forward substitution.
pub fn kappa_from_lambda(m: &[Vec<Rational>], lambda: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = lambda.len();
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::arg("matrix and vector sizes differ"));
    }
    let f = |r: &Rational| *r.numer() as f64 / *r.denom() as f64;
    let mut kappa = alloc::vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let mut acc = lambda[k];
        for j in 0..k {
            acc -= kappa[j] * f(&m[k][j]);
        }
        let d = f(&m[k][k]);
        if d == 0.0 {
            return Err(Error::arg("singular matrix"));
        }
        kappa[k] = acc / d;
    }
    Ok(kappa)
}

/// Coordinates of a homogeneous Lie element in the basis of standard
/// bracketings of Lyndon words.
///
/// Repeatedly removes the smallest surviving word `w` (which must be Lyndon)
/// together with `c · K_w`. Fails if something other than a Lie element is
/// passed.
pub fn lie_coordinates(p: &NCPoly) -> Result<Vec<(Word, CoefPoly)>> {
    let alphabet = p.alphabet();
    let mut rest = p.clone();
    let mut out = Vec::new();
    while let Some((w, c)) = rest.leading() {
        let (w, c) = (w.clone(), c.clone());
        if !w.is_lyndon() {
            return Err(Error::arg(alloc::format!(
                "not a Lie element: smallest remaining word {w} is not Lyndon"
            )));
        }
        let k = expand_commutator(&standard_bracketing(&w)?, alphabet)?;
        rest = rest.sub(&k.scale(&c))?;
        out.push((w, c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn unit_lower_triangular() {
        for (alph, q) in [(Alphabet::AB, 5), (Alphabet::AB, 6), (Alphabet::ABC, 4)] {
            let m = m_matrix(alph, q).unwrap();
            for (k, row) in m.iter().enumerate() {
                assert!(row[k].is_one());
                assert!(row[k + 1..].iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn length_three() {
        // K_AAB = AAB - 2ABA + BAA, K_ABB = ABB - 2BAB + BBA
        let m = m_matrix(Alphabet::AB, 3).unwrap();
        assert!(m[1][0].is_zero());
    }

    #[test]
    fn coordinates_round_trip() {
        let w = |s: &str| Word::parse(s).unwrap();
        let k1 = expand_commutator(&standard_bracketing(&w("AABAB")).unwrap(), Alphabet::AB)
            .unwrap();
        let k2 = expand_commutator(&standard_bracketing(&w("AAABB")).unwrap(), Alphabet::AB)
            .unwrap();
        let p = k1.scale(&CoefPoly::integer(3)).sub(&k2).unwrap();
        let coords = lie_coordinates(&p).unwrap();
        assert_eq!(
            coords,
            [
                (w("AAABB"), CoefPoly::integer(-1)),
                (w("AABAB"), CoefPoly::integer(3))
            ]
        );
        let not_lie = NCPoly::monomial(Alphabet::AB, w("BA"), CoefPoly::one()).unwrap();
        assert!(lie_coordinates(&not_lie).is_err());
    }
}
