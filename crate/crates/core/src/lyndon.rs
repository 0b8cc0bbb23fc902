//! Lyndon words over the alphabets `{A, B}` and `{A, B, C}`, their standard
//! bracketings, and the reverse-and-swap "twin" pairing used to reduce the
//! conditions of palindromic schemes.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Letter index: `0 = A`, `1 = B`, `2 = C`.
pub type Letter = u8;

pub const A: Letter = 0;
pub const B: Letter = 1;
pub const C: Letter = 2;

/// Ordered alphabet of two or three letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet(u8);

impl Alphabet {
    pub const AB: Alphabet = Alphabet(2);
    pub const ABC: Alphabet = Alphabet(3);

    pub fn new(size: u8) -> Result<Self> {
        match size {
            2 | 3 => Ok(Alphabet(size)),
            _ => Err(Error::arg(alloc::format!(
                "alphabet size must be 2 or 3, got {size}"
            ))),
        }
    }

    pub fn size(self) -> u8 {
        self.0
    }

    pub fn letters(self) -> impl DoubleEndedIterator<Item = Letter> + Clone {
        0..self.0
    }

    pub fn contains(self, letter: Letter) -> bool {
        letter < self.0
    }
}

pub fn letter_char(letter: Letter) -> char {
    (b'A' + letter) as char
}

pub fn letter_from_char(c: char) -> Option<Letter> {
    match c {
        'A' => Some(A),
        'B' => Some(B),
        'C' => Some(C),
        _ => None,
    }
}

/// A word over `A < B < C`. Comparison is lexicographic, a proper prefix
/// being smaller than its extensions.
///
/// The empty word only appears as the unit of the free algebra; every word
/// handed out by the Lyndon routines is nonempty.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::arg("a word needs at least one letter"));
        }
        if letters.iter().any(|&l| l > C) {
            return Err(Error::arg("letters are limited to A, B, C"));
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(s.len());
        for (i, ch) in s.chars().enumerate() {
            letters.push(letter_from_char(ch).ok_or_else(|| {
                Error::parse(i, alloc::format!("unexpected character {ch:?} in word"))
            })?);
        }
        Word::new(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Exchanges `A` and `B`; `C` is left alone.
    pub fn swapped_ab(&self) -> Word {
        Word(
            self.0
                .iter()
                .map(|&l| match l {
                    A => B,
                    B => A,
                    other => other,
                })
                .collect(),
        )
    }

    pub fn fits(&self, alphabet: Alphabet) -> bool {
        self.0.iter().all(|&l| alphabet.contains(l))
    }

    /// True iff the word is strictly smaller than each of its proper rotations.
    pub fn is_lyndon(&self) -> bool {
        is_lyndon(&self.0)
    }

    /// Smallest rotation of the word.
    pub fn least_rotation(&self) -> Word {
        let n = self.len();
        (0..n.max(1))
            .map(|r| {
                let mut v = Vec::with_capacity(n);
                v.extend_from_slice(&self.0[r..]);
                v.extend_from_slice(&self.0[..r]);
                v
            })
            .min()
            .map(Word)
            .unwrap_or_default()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.0 {
            write!(f, "{}", letter_char(l))?;
        }
        Ok(())
    }
}

fn is_lyndon(w: &[Letter]) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    // w < rotation(w, r) for every 0 < r < n
    (1..n).all(|r| {
        let rotated = w[r..].iter().chain(w[..r].iter());
        w.iter().lt(rotated)
    })
}

/// All Lyndon words of exactly `length` letters, in increasing
/// lexicographic order.
///
/// Uses Duval's successor rule, which walks the Lyndon words of length
/// at most `length` in lexicographic order with constant amortized cost.
pub fn lyndon_words(alphabet: Alphabet, length: usize) -> Result<Vec<Word>> {
    if length == 0 {
        return Err(Error::arg("Lyndon word length must be positive"));
    }
    let k = alphabet.size();
    let mut out = Vec::new();
    let mut w: Vec<Letter> = vec![0];
    loop {
        if w.len() == length {
            out.push(Word(w.clone()));
        }
        let m = w.len();
        while w.len() < length {
            let l = w[w.len() - m];
            w.push(l);
        }
        while let Some(&last) = w.last() {
            if last + 1 == k {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    Ok(out)
}

/// Every word of exactly `length` letters, in lexicographic order.
pub fn all_words(alphabet: Alphabet, length: usize) -> Vec<Word> {
    let k = alphabet.size();
    let mut out = Vec::new();
    let mut w: Vec<Letter> = vec![0; length];
    loop {
        out.push(Word(w.clone()));
        let mut i = length;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if w[i] + 1 < k {
                w[i] += 1;
                break;
            }
            w[i] = 0;
        }
    }
}

/// A nested commutator. Leaves are single letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bracket {
    Leaf(Letter),
    Commutator(Box<Bracket>, Box<Bracket>),
}

impl Bracket {
    /// Left-to-right sequence of leaves.
    pub fn foliage(&self) -> Word {
        let mut v = Vec::new();
        self.collect_leaves(&mut v);
        Word(v)
    }

    fn collect_leaves(&self, out: &mut Vec<Letter>) {
        match self {
            Bracket::Leaf(l) => out.push(*l),
            Bracket::Commutator(x, y) => {
                x.collect_leaves(out);
                y.collect_leaves(out);
            }
        }
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracket::Leaf(l) => write!(f, "{}", letter_char(*l)),
            Bracket::Commutator(x, y) => write!(f, "[{x},{y}]"),
        }
    }
}

/// Standard bracketing of a Lyndon word: `w = uv` with `v` the longest
/// proper suffix that is itself Lyndon, giving `[bracket(u), bracket(v)]`.
pub fn standard_bracketing(w: &Word) -> Result<Bracket> {
    if !w.is_lyndon() {
        return Err(Error::arg(alloc::format!("{w} is not a Lyndon word")));
    }
    Ok(bracket_lyndon(&w.0))
}

fn bracket_lyndon(w: &[Letter]) -> Bracket {
    if w.len() == 1 {
        return Bracket::Leaf(w[0]);
    }
    let split = (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("the last letter is always a Lyndon suffix");
    Bracket::Commutator(
        Box::new(bracket_lyndon(&w[..split])),
        Box::new(bracket_lyndon(&w[split..])),
    )
}

/// How a Lyndon word over `{A, B}` relates to its reverse-and-swap image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwinClass {
    /// The image is a different Lyndon word.
    Twin(Word),
    /// The image is the word itself.
    Selfie,
    /// The image, read verbatim, is not a Lyndon word.
    Solitary,
}

/// Reverse-and-swap image of a two-letter Lyndon word when that image is
/// again Lyndon (a twin, or the word itself for a selfie). `None` marks a
/// solitary word.
pub fn twin_of(w: &Word) -> Result<Option<Word>> {
    if !w.fits(Alphabet::AB) {
        return Err(Error::Unsupported(
            "twins are defined for the alphabet {A, B} only".into(),
        ));
    }
    if !w.is_lyndon() {
        return Err(Error::arg(alloc::format!("{w} is not a Lyndon word")));
    }
    let image = w.swapped_ab().reversed();
    Ok(image.is_lyndon().then_some(image))
}

pub fn twin_class(w: &Word) -> Result<TwinClass> {
    Ok(match twin_of(w)? {
        Some(image) if image == *w => TwinClass::Selfie,
        Some(image) => TwinClass::Twin(image),
        None => TwinClass::Solitary,
    })
}

/// Renders a list of words the way the command line prints them.
pub fn join_words(words: &[Word]) -> String {
    let mut s = String::new();
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&alloc::format!("{w}"));
    }
    s
}
