use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// A commuting indeterminate: a scheme coefficient `a_j`, `b_j`, `c_j`, or a
/// composition weight `w_j`. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    family: u8,
    index: u16,
}

impl Var {
    pub const FAMILIES: [char; 4] = ['a', 'b', 'c', 'w'];
    pub const WEIGHT: u8 = 3;

    /// Coefficient of operator `letter` in stage `stage` (1-based).
    pub fn coefficient(letter: u8, stage: usize) -> Var {
        debug_assert!(letter < 3 && stage >= 1);
        Var {
            family: letter,
            index: stage as u16,
        }
    }

    pub fn weight(index: usize) -> Var {
        Var {
            family: Self::WEIGHT,
            index: index as u16,
        }
    }

    pub fn family(self) -> u8 {
        self.family
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn parse(s: &str) -> Result<Var> {
        let mut chars = s.chars();
        let fam = chars
            .next()
            .and_then(|c| Self::FAMILIES.iter().position(|&f| f == c))
            .ok_or_else(|| Error::parse(0, alloc::format!("bad variable {s:?}")))?;
        let index: u16 = chars
            .as_str()
            .parse()
            .map_err(|_| Error::parse(1, alloc::format!("bad variable index in {s:?}")))?;
        if index == 0 {
            return Err(Error::parse(1, "variable indices start at 1"));
        }
        Ok(Var {
            family: fam as u8,
            index,
        })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", Self::FAMILIES[self.family as usize], self.index)
    }
}

/// Power product of variables. Factors are sorted by variable and carry
/// positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial {
            degree: 1,
            factors: alloc::vec![(v, 1)],
        }
    }

    /// Builds a monomial from unsorted factors, merging repeated variables.
    pub fn from_factors(mut factors: Vec<(Var, u32)>) -> Self {
        factors.retain(|&(_, e)| e > 0);
        factors.sort_unstable_by_key(|&(v, _)| v);
        let mut merged: Vec<(Var, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((last, acc)) if *last == v => *acc += e,
                _ => merged.push((v, e)),
            }
        }
        let degree = merged.iter().map(|&(_, e)| e).sum();
        Monomial {
            degree,
            factors: merged,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.factors
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (v, e) = self.factors[i];
            let (w, f) = other.factors[j];
            match v.cmp(&w) {
                Ordering::Less => {
                    out.push((v, e));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((w, f));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((v, e + f));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial {
            degree: self.degree + other.degree,
            factors: out,
        }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the exponent vector
    /// over `a_1 < ... < a_s < b_1 < ... < c_s < w_1 ...`, a larger exponent
    /// of an earlier variable ranking higher.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (x, y) in self.factors.iter().zip(other.factors.iter()) {
                let ord = match x.0.cmp(&y.0) {
                    // self has a positive exponent where other has none
                    Ordering::Less => Ordering::Greater,
                    Ordering::Greater => Ordering::Less,
                    Ordering::Equal => x.1.cmp(&y.1),
                };
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            self.factors.len().cmp(&other.factors.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// What a variable turns into under a substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subst {
    Keep,
    Zero,
    Rename(Var),
}

/// Commutative polynomial with exact rational coefficients, kept in
/// canonical form: no zero coefficients, one entry per monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoefPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl CoefPoly {
    pub fn zero() -> Self {
        CoefPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = CoefPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn integer(c: i128) -> Self {
        Self::constant(Rational::from_integer(c))
    }

    pub fn var(v: Var) -> Self {
        let mut p = CoefPoly::zero();
        p.add_term(Monomial::var(v), Rational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = CoefPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
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

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = *e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one())
            .copied()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|&(v, _)| v))
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn add(&self, other: &CoefPoly) -> CoefPoly {
        let mut out = self.clone();
        out += other;
        out
    }

    pub fn sub(&self, other: &CoefPoly) -> CoefPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -*c);
        }
        out
    }

    pub fn neg(&self) -> CoefPoly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> CoefPoly {
        if c.is_zero() {
            return CoefPoly::zero();
        }
        CoefPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), *x * *c)).collect(),
        }
    }

    pub fn mul(&self, other: &CoefPoly) -> CoefPoly {
        let mut out = CoefPoly::zero();
        for (m, x) in &self.terms {
            for (n, y) in &other.terms {
                out.add_term(m.mul(n), *x * *y);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> CoefPoly {
        let mut acc = CoefPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to `v`.
    pub fn derivative(&self, v: Var) -> CoefPoly {
        let mut out = CoefPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let factors = m
                .factors
                .iter()
                .map(|&(w, f)| if w == v { (w, f - 1) } else { (w, f) })
                .collect();
            out.add_term(
                Monomial::from_factors(factors),
                *c * Rational::from_integer(e as i128),
            );
        }
        out
    }

    /// Renames or zeroes variables.
    pub fn substitute(&self, rule: impl Fn(Var) -> Subst) -> CoefPoly {
        let mut out = CoefPoly::zero();
        'terms: for (m, c) in &self.terms {
            let mut factors = Vec::with_capacity(m.factors.len());
            for &(v, e) in &m.factors {
                match rule(v) {
                    Subst::Keep => factors.push((v, e)),
                    Subst::Rename(w) => factors.push((w, e)),
                    Subst::Zero => continue 'terms,
                }
            }
            out.add_term(Monomial::from_factors(factors), *c);
        }
        out
    }

    /// Evaluates with a caller-supplied scalar type.
    pub fn eval_with<T, F>(&self, value: F, from_ratio: impl Fn(&Rational) -> T) -> T
    where
        T: Clone + core::ops::Add<Output = T> + core::ops::Mul<Output = T>,
        F: Fn(Var) -> T,
    {
        let mut acc: Option<T> = None;
        for (m, c) in &self.terms {
            let mut t = from_ratio(c);
            for &(v, e) in &m.factors {
                let x = value(v);
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a + t,
            });
        }
        acc.unwrap_or_else(|| from_ratio(&Rational::zero()))
    }

    pub fn parse(s: &str) -> Result<CoefPoly> {
        Parser { src: s, pos: 0 }.poly()
    }
}

impl core::ops::AddAssign<&CoefPoly> for CoefPoly {
    fn add_assign(&mut self, other: &CoefPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), *c);
        }
    }
}

fn fmt_rational(f: &mut fmt::Formatter<'_>, r: &Rational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CoefPoly {
    /// Highest monomial first: `3*a2^2*b1 - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.factors.is_empty() {
                fmt_rational(f, &mag)?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                fmt_rational(f, &mag)?;
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn poly(mut self) -> Result<CoefPoly> {
        let mut out = CoefPoly::zero();
        self.skip_ws();
        let mut sign = Rational::one();
        match self.peek() {
            Some(b'-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            None => return Err(Error::parse(self.pos, "empty polynomial")),
            _ => {}
        }
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, c * sign);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => sign = Rational::one(),
                Some(b'-') => sign = -Rational::one(),
                Some(other) => {
                    return Err(Error::parse(
                        self.pos,
                        alloc::format!("expected '+' or '-', found {:?}", other as char),
                    ))
                }
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let mut coef = Rational::one();
        let mut factors = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coef *= self.number()?,
                Some(c) if Var::FAMILIES.contains(&(c as char)) => {
                    let v = self.variable()?;
                    self.skip_ws();
                    let mut e = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        e = self.integer()? as u32;
                    }
                    factors.push((v, e));
                }
                _ => return Err(Error::parse(self.pos, "expected a number or a variable")),
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Monomial::from_factors(factors), coef))
    }

    fn integer(&mut self) -> Result<i128> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::parse(start, "expected an integer"))
    }

    fn number(&mut self) -> Result<Rational> {
        let n = self.integer()?;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let d = self.integer()?;
            if d == 0 {
                return Err(Error::parse(start, "zero denominator"));
            }
            return Ok(Rational::new(n, d));
        }
        Ok(Rational::from_integer(n))
    }

    fn variable(&mut self) -> Result<Var> {
        let start = self.pos;
        self.pos += 1;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        Var::parse(&self.src[start..self.pos]).map_err(|e| match e {
            Error::Parse { message, .. } => Error::parse(start, message),
            other => other,
        })
    }
}

/// Parses a polynomial literal, panicking on malformed input. Meant for
/// goldens and tests.
pub fn poly(s: &str) -> CoefPoly {
    CoefPoly::parse(s).unwrap_or_else(|e| panic!("bad polynomial literal {s:?}: {e}"))
}
