//! Derivatives of the local error.
//!
//! The `q`-th derivative at `h = 0` of
//! `exp(h b_s B) exp(h a_s A) ... exp(h b_1 B) exp(h a_1 A) − exp(h(A + B))`
//! is a sum over multi-indices `k = (k_1, ..., k_s)` with `|k| = q` of
//! multinomial-weighted products of per-stage expansions. A word `w` receives
//! a contribution from `k` exactly when `w` splits into consecutive segments
//! of lengths `k_s, ..., k_1` that are each of the form `C^i B^j A^l`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::freealg::{CoefPoly, Monomial, Rational, Var};
use crate::lyndon::{all_words, Word};

use super::shape::SchemeShape;

/// Largest derivative order handled; `q!` must fit the integer type.
pub const MAX_DERIVATIVE: usize = 30;

/// Weak compositions of `total` into `parts` parts, in colexicographic order
/// starting from `(total, 0, ..., 0)`.
#[derive(Clone, Debug)]
pub struct Compositions {
    k: Vec<u32>,
    started: bool,
    done: bool,
}

impl Compositions {
    pub fn new(total: u32, parts: usize) -> Self {
        let mut k = vec![0; parts];
        if let Some(first) = k.first_mut() {
            *first = total;
        }
        Compositions {
            k,
            started: false,
            done: parts == 0,
        }
    }

    /// Steps to the next composition. A lending iterator, so that the hot
    /// loop does not allocate.
    pub fn advance(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.k);
        }
        let j = self.k.iter().position(|&x| x > 0)?;
        if j + 1 == self.k.len() {
            self.done = true;
            return None;
        }
        let t = self.k[j];
        self.k[j] = 0;
        self.k[0] = t - 1;
        self.k[j + 1] += 1;
        Some(&self.k)
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        self.advance().map(<[u32]>::to_vec)
    }
}

/// Number of weak compositions of `total` into `parts` parts.
pub fn composition_count(total: usize, parts: usize) -> u128 {
    if parts == 0 {
        return u128::from(total == 0);
    }
    binomial((total + parts - 1) as u128, (parts - 1) as u128)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// One derivative order, split into independent pieces of work.
///
/// `partial(worker, workers)` handles the multi-indices whose position in
/// the enumeration is congruent to `worker`; summing all partials and
/// calling [`TaylorJob::finish`] gives the coefficients of the requested
/// words.
#[derive(Clone, Debug)]
pub struct TaylorJob<'a> {
    shape: &'a SchemeShape,
    q: usize,
    words: Vec<Word>,
    /// `run_end[i][p]`: end of the longest non-increasing run starting at `p`
    run_end: Vec<Vec<usize>>,
    factorial: Vec<i128>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorPartial {
    sums: Vec<CoefPoly>,
}

impl<'a> TaylorJob<'a> {
    pub fn new(shape: &'a SchemeShape, q: usize, words: Vec<Word>) -> Result<Self> {
        if q == 0 || q > MAX_DERIVATIVE {
            return Err(Error::arg(alloc::format!(
                "derivative order must lie in 1..={MAX_DERIVATIVE}"
            )));
        }
        if let Some(w) = words
            .iter()
            .find(|w| w.len() != q || !w.fits(shape.alphabet()))
        {
            return Err(Error::arg(alloc::format!(
                "word {w} is not a word of length {q} over {} letters",
                shape.alphabet().size()
            )));
        }
        let run_end = words
            .iter()
            .map(|w| {
                let l = w.letters();
                let mut ends = vec![q; q + 1];
                for p in (0..q.saturating_sub(1)).rev() {
                    ends[p] = if l[p] >= l[p + 1] { ends[p + 1] } else { p + 1 };
                }
                ends
            })
            .collect();
        let mut factorial = vec![1i128; q + 1];
        for i in 1..=q {
            factorial[i] = factorial[i - 1] * i as i128;
        }
        Ok(TaylorJob {
            shape,
            q,
            words,
            run_end,
            factorial,
        })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn multi_index_count(&self) -> u128 {
        composition_count(self.q, self.shape.stages())
    }

    pub fn partial(&self, worker: usize, workers: usize) -> TaylorPartial {
        let workers = workers.max(1);
        let s = self.shape.stages();
        let mut sums = vec![CoefPoly::zero(); self.words.len()];
        let mut it = Compositions::new(self.q as u32, s);
        let mut index = 0usize;
        let mut factors: Vec<(Var, u32)> = Vec::new();
        while let Some(k) = it.advance() {
            let mine = index % workers == worker;
            index += 1;
            if !mine {
                continue;
            }
            'words: for (wi, w) in self.words.iter().enumerate() {
                let letters = w.letters();
                let ends = &self.run_end[wi];
                let mut pos = 0usize;
                let mut denom: i128 = 1;
                factors.clear();
                for stage in (1..=s).rev() {
                    let len = k[stage - 1] as usize;
                    if len == 0 {
                        continue;
                    }
                    if ends[pos] < pos + len {
                        continue 'words;
                    }
                    let mut start = pos;
                    while start < pos + len {
                        let letter = letters[start];
                        let mut end = start;
                        while end < pos + len && letters[end] == letter {
                            end += 1;
                        }
                        let count = end - start;
                        match self.shape.representative(letter, stage) {
                            Some(v) => factors.push((v, count as u32)),
                            None => continue 'words,
                        }
                        denom *= self.factorial[count];
                        start = end;
                    }
                    pos += len;
                }
                let c = Rational::from_integer(self.factorial[self.q] / denom);
                sums[wi].add_term(Monomial::from_factors(factors.clone()), c);
            }
        }
        TaylorPartial { sums }
    }

    /// Adds up partial sums and subtracts the exact flow contribution, which
    /// is one for every word.
    pub fn finish(&self, parts: impl IntoIterator<Item = TaylorPartial>) -> Vec<CoefPoly> {
        let mut total = vec![CoefPoly::zero(); self.words.len()];
        for part in parts {
            for (t, p) in total.iter_mut().zip(&part.sums) {
                *t += p;
            }
        }
        for t in &mut total {
            *t += &CoefPoly::integer(-1);
        }
        total
    }

    pub fn run(&self) -> Vec<CoefPoly> {
        self.finish([self.partial(0, 1)])
    }
}

/// The full `q`-th derivative of the local error as an element of the free
/// algebra, symmetry substitutions applied.
pub fn taylor_derivative(shape: &SchemeShape, q: usize) -> Result<crate::freealg::NCPoly> {
    let words = all_words(shape.alphabet(), q);
    let job = TaylorJob::new(shape, q, words)?;
    let coeffs = job.run();
    let mut out = crate::freealg::NCPoly::zero(shape.alphabet());
    for (w, c) in job.words.iter().zip(coeffs) {
        out.add_term(w.clone(), c);
    }
    Ok(out)
}

/// Coefficients of `words` in the `q`-th derivative at numeric stage
/// coefficients, without building polynomials.
///
/// The scheme is a product of single-letter exponentials
/// `exp(y_1 L_1) ... exp(y_n L_n)` (leftmost applied last); the coefficient
/// of `w` is a sum over ways of cutting `w` into blocks `L_i^{m_i}`, which a
/// small dynamic program evaluates.
pub fn numeric_word_coefficients(
    coeffs: &super::StageCoefficients,
    words: &[Word],
) -> Vec<num_complex::Complex64> {
    use num_complex::Complex64;
    let s = coeffs.stages();
    let mut factors: Vec<(u8, Complex64)> = Vec::new();
    for stage in (1..=s).rev() {
        for letter in coeffs.alphabet.letters().rev() {
            let y = coeffs.coeffs[letter as usize][stage - 1];
            if y != Complex64::new(0.0, 0.0) {
                factors.push((letter, y));
            }
        }
    }
    words
        .iter()
        .map(|w| {
            let l = w.letters();
            let q = l.len();
            // dp[p]: weight of covering the first p letters with factors so far
            let mut dp = vec![Complex64::new(0.0, 0.0); q + 1];
            dp[0] = Complex64::new(1.0, 0.0);
            for &(letter, y) in &factors {
                for p in (0..q).rev() {
                    if dp[p] == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut term = dp[p];
                    let mut e = p;
                    while e < q && l[e] == letter {
                        e += 1;
                        term = term * y / (e - p) as f64;
                        dp[e] += term;
                    }
                }
            }
            let mut fact = 1.0;
            for i in 1..=q {
                fact *= i as f64;
            }
            dp[q] * fact - 1.0
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::{Symmetry, StageCoefficients};
    use crate::freealg::poly;
    use crate::lyndon::Alphabet;

    #[test]
    fn compositions_in_colex_order() {
        let all: Vec<Vec<u32>> = Compositions::new(2, 3).collect();
        assert_eq!(
            all,
            [
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![0, 2, 0],
                vec![1, 0, 1],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        for (q, s) in [(0, 3), (4, 1), (5, 4), (3, 6)] {
            assert_eq!(
                Compositions::new(q, s).count() as u128,
                composition_count(q as usize, s)
            );
        }
    }

    #[test]
    fn two_stage_second_derivative() {
        let shape = SchemeShape::generic(2, Alphabet::AB).unwrap();
        let w = |s: &str| Word::parse(s).unwrap();
        let job = TaylorJob::new(&shape, 2, vec![w("AB")]).unwrap();
        // AB is increasing, so A and B come from different stages, A from
        // the later one.
        assert_eq!(job.run()[0], poly("2*a2*b1 - 1"));
    }

    #[test]
    fn partials_sum_to_the_whole() {
        let shape = SchemeShape::generic(3, Alphabet::AB).unwrap();
        let words = crate::lyndon::lyndon_words(Alphabet::AB, 4).unwrap();
        let job = TaylorJob::new(&shape, 4, words).unwrap();
        let whole = job.run();
        let split = job.finish((0..3).map(|i| job.partial(i, 3)));
        assert_eq!(whole, split);
    }

    #[test]
    fn numeric_matches_symbolic() {
        let shape = SchemeShape::generic(3, Alphabet::ABC).unwrap();
        let coeffs = StageCoefficients::real(
            Alphabet::ABC,
            &[&[0.3, -0.2, 0.5], &[0.7, 0.1, 0.4], &[-0.6, 0.25, 0.9]],
        )
        .unwrap();
        let words = all_words(Alphabet::ABC, 4);
        let job = TaylorJob::new(&shape, 4, words.clone()).unwrap();
        let numeric = numeric_word_coefficients(&coeffs, &words);
        for (p, x) in job.run().iter().zip(numeric) {
            let y = p.eval_with(
                |v| num_complex::Complex64::from(coeffs.get(v)),
                |r| num_complex::Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0),
            );
            assert!((x - y).norm() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn symmetric_substitution_applies() {
        let shape = SchemeShape::new(
            2,
            Alphabet::AB,
            Symmetry::Symmetric(super::super::SymmetricVariant::LastBZero),
        )
        .unwrap();
        let d1 = taylor_derivative(&shape, 1).unwrap();
        assert_eq!(d1.coefficient_of(&Word::parse("A").unwrap()), poly("2*a1 - 1"));
        assert_eq!(d1.coefficient_of(&Word::parse("B").unwrap()), poly("b1 - 1"));
    }
}
