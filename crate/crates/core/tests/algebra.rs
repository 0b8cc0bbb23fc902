use proptest::prelude::*;
use splitting_core::freealg::{CoefPoly, Monomial, NCPoly, Rational, Var};
use splitting_core::lyndon::{Alphabet, Word};

fn coef_poly() -> impl Strategy<Value = CoefPoly> {
    let var = prop_oneof![Just("a1"), Just("a2"), Just("b1")].prop_map(|s| Var::parse(s).unwrap());
    let mono = prop::collection::vec((var, 1u32..3), 0..3).prop_map(Monomial::from_factors);
    let coef = (-5i128..6, 1i128..4).prop_map(|(n, d)| Rational::new(n, d));
    prop::collection::vec((mono, coef), 0..4).prop_map(CoefPoly::from_terms)
}

fn nc_poly() -> impl Strategy<Value = NCPoly> {
    let word = prop::collection::vec(0u8..2, 0..4)
        .prop_map(|l| if l.is_empty() { Word::empty() } else { Word::new(l).unwrap() });
    prop::collection::vec((word, -3i128..4), 0..4).prop_map(|terms| {
        let mut p = NCPoly::zero(Alphabet::AB);
        for (w, c) in terms {
            let m = NCPoly::monomial(Alphabet::AB, w, CoefPoly::integer(c)).unwrap();
            p = p.add(&m).unwrap();
        }
        p
    })
}

proptest! {
    #[test]
    fn coefficient_ring(x in coef_poly(), y in coef_poly(), z in coef_poly()) {
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.mul(&CoefPoly::one()), x.clone());
        prop_assert!(x.sub(&x).is_zero());
        prop_assert_eq!(x.add(&x.neg()), CoefPoly::zero());
    }

    #[test]
    fn parse_inverts_display(x in coef_poly()) {
        prop_assert_eq!(CoefPoly::parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn derivative_is_a_derivation(x in coef_poly(), y in coef_poly()) {
        let v = Var::parse("a1").unwrap();
        let lhs = x.mul(&y).derivative(v);
        let rhs = x.derivative(v).mul(&y).add(&x.mul(&y.derivative(v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn free_algebra(x in nc_poly(), y in nc_poly(), z in nc_poly()) {
        let one = NCPoly::one(Alphabet::AB);
        prop_assert_eq!(x.mul(&one).unwrap(), x.clone());
        prop_assert_eq!(one.mul(&x).unwrap(), x.clone());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(
            x.mul(&y.add(&z).unwrap()).unwrap(),
            x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
        );
        prop_assert!(x.sub(&x).unwrap().is_zero());
    }

    #[test]
    fn jacobi_identity(x in nc_poly(), y in nc_poly(), z in nc_poly()) {
        let c = |p: &NCPoly, q: &NCPoly| p.commutator(q).unwrap();
        let sum = c(&x, &c(&y, &z))
            .add(&c(&y, &c(&z, &x)))
            .unwrap()
            .add(&c(&z, &c(&x, &y)))
            .unwrap();
        prop_assert!(sum.is_zero());
    }
}
