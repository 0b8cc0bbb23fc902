use proptest::prelude::*;
use splitting_core::lyndon::{
    all_words, lyndon_words, standard_bracketing, twin_class, twin_of, Alphabet, TwinClass, Word,
};

/// A word is Lyndon iff it is strictly smaller than each of its proper
/// rotations. Checked by building every rotation.
fn lyndon_by_rotation(w: &[u8]) -> bool {
    (1..w.len()).all(|i| {
        let mut r = w[i..].to_vec();
        r.extend_from_slice(&w[..i]);
        w < r.as_slice()
    })
}

fn brute_force(size: u8, q: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut w = vec![0u8; q];
    loop {
        if lyndon_by_rotation(&w) {
            out.push(w.clone());
        }
        let mut i = q;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            w[i] += 1;
            if w[i] < size {
                break;
            }
            w[i] = 0;
        }
    }
}

#[test]
fn generator_matches_brute_force() {
    for (alphabet, max_q) in [(Alphabet::AB, 12), (Alphabet::ABC, 8)] {
        for q in 1..=max_q {
            let got: Vec<Vec<u8>> = lyndon_words(alphabet, q)
                .unwrap()
                .iter()
                .map(|w| w.letters().to_vec())
                .collect();
            assert_eq!(got, brute_force(alphabet.size(), q), "alphabet {}, q {q}", alphabet.size());
        }
    }
}

#[test]
fn two_letter_table() {
    let counts: Vec<usize> = (1..=10).map(|q| lyndon_words(Alphabet::AB, q).unwrap().len()).collect();
    assert_eq!(counts, [2, 1, 2, 3, 6, 9, 18, 30, 56, 99]);
}

#[test]
fn three_letter_counts() {
    let counts: Vec<usize> = (1..=8).map(|q| lyndon_words(Alphabet::ABC, q).unwrap().len()).collect();
    // necklace formula at q = 6: (3^6 - 3^3 - 3^2 + 3) / 6 = 116
    assert_eq!(counts, [3, 3, 8, 18, 48, 116, 312, 810]);
    assert_eq!(counts[..6].iter().sum::<usize>(), 196);
}

#[test]
fn length_six_words() {
    let got: Vec<String> = lyndon_words(Alphabet::AB, 6).unwrap().iter().map(|w| w.to_string()).collect();
    assert_eq!(
        got,
        ["AAAAAB", "AAAABB", "AAABAB", "AAABBB", "AABABB", "AABBAB", "AABBBB", "ABABBB", "ABBBBB"]
    );
}

#[test]
fn twins_at_length_five_and_six() {
    let w = |s: &str| Word::parse(s).unwrap();
    assert_eq!(twin_of(&w("AAAAB")).unwrap(), Some(w("ABBBB")));
    assert_eq!(twin_class(&w("AAABBB")).unwrap(), TwinClass::Selfie);
    assert_eq!(twin_class(&w("AB")).unwrap(), TwinClass::Selfie);

    let five = lyndon_words(Alphabet::AB, 5).unwrap();
    let pairs = five
        .iter()
        .filter(|x| matches!(twin_class(x).unwrap(), TwinClass::Twin(_)))
        .count();
    assert_eq!(pairs, 6);

    let six = lyndon_words(Alphabet::AB, 6).unwrap();
    let (mut twins, mut selfies, mut solitary) = (0, 0, 0);
    for x in &six {
        match twin_class(x).unwrap() {
            TwinClass::Twin(_) => twins += 1,
            TwinClass::Selfie => selfies += 1,
            TwinClass::Solitary => solitary += 1,
        }
    }
    assert_eq!(twins, 6);
    assert_eq!(selfies + solitary, 3);
}

#[test]
fn twin_of_is_an_involution() {
    for q in 1..=10 {
        for x in lyndon_words(Alphabet::AB, q).unwrap() {
            if let Some(y) = twin_of(&x).unwrap() {
                assert_eq!(twin_of(&y).unwrap(), Some(x.clone()));
            }
        }
    }
}

#[test]
fn all_words_enumerates_everything() {
    let w = all_words(Alphabet::ABC, 4);
    assert_eq!(w.len(), 81);
    assert!(w.windows(2).all(|p| p[0] < p[1]));
}

proptest! {
    #[test]
    fn bracketing_keeps_the_letters(q in 1usize..=9, pick in any::<prop::sample::Index>()) {
        let words = lyndon_words(Alphabet::AB, q).unwrap();
        let w = &words[pick.index(words.len())];
        prop_assert_eq!(&standard_bracketing(w).unwrap().foliage(), w);
    }

    #[test]
    fn least_rotation_is_minimal(letters in prop::collection::vec(0u8..3, 1..10)) {
        let w = Word::new(letters.clone()).unwrap();
        let r = w.least_rotation();
        for i in 0..letters.len() {
            let mut rot = letters[i..].to_vec();
            rot.extend_from_slice(&letters[..i]);
            prop_assert!(r.letters() <= rot.as_slice());
        }
    }
}
