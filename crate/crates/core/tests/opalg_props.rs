mod common;

use common::rational;
use proptest::prelude::*;
use superint::opalg::{commutator, sym_anticommutator, OpPoly};
use superint::symcore::DPoly;

/// Small operators with polynomial coefficients in `x`, `y`, `V1`, `V2`.
fn coefficient() -> impl Strategy<Value = DPoly> {
    prop::collection::vec(
        (
            rational(),
            0u32..=2,
            0u32..=2,
            prop_oneof![
                Just(DPoly::one()),
                Just(DPoly::jet("V1", 0)),
                Just(DPoly::jet("V2", 0)),
                Just(DPoly::jet("V1", 1))
            ],
        ),
        1..3,
    )
    .prop_map(|ts| {
        ts.into_iter().fold(DPoly::zero(), |acc, (c, a, b, v)| {
            &acc + &(&(&c * &DPoly::x().pow(a)) * &(&DPoly::y().pow(b) * &v))
        })
    })
}

fn operator() -> impl Strategy<Value = OpPoly> {
    prop::collection::vec((coefficient(), 0u32..=2, 0u32..=1), 1..3).prop_map(|ws| {
        ws.into_iter()
            .fold(OpPoly::zero(), |acc, (g, c, d)| &acc + &OpPoly::word(g, (c, d)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(a in operator(), b in operator(), c in operator()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn commutator_is_antisymmetric(a in operator(), b in operator()) {
        prop_assert_eq!(commutator(&a, &b), &OpPoly::zero() - &commutator(&b, &a));
    }

    #[test]
    fn jacobi_identity(a in operator(), b in operator(), c in operator()) {
        let t1 = commutator(&a, &commutator(&b, &c));
        let t2 = commutator(&b, &commutator(&c, &a));
        let t3 = commutator(&c, &commutator(&a, &b));
        prop_assert!((&(&t1 + &t2) + &t3).is_zero());
    }

    #[test]
    fn adjoint_reverses_products(a in operator(), b in operator()) {
        prop_assert_eq!(a.mul(&b).adjoint(), b.adjoint().mul(&a.adjoint()));
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn symmetrised_words_are_hermitian(f in coefficient(), j in 0u32..=3, k in 0u32..=3) {
        prop_assert!(sym_anticommutator(&f, (j, k)).is_hermitian());
    }

    #[test]
    fn hamiltonian_commutes_with_functions_of_nothing(c in rational()) {
        prop_assert!(commutator(&OpPoly::hamiltonian(), &OpPoly::func(c)).is_zero());
    }
}

#[test]
fn canonical_commutators() {
    let ih = &DPoly::i() * &DPoly::hbar();
    assert_eq!(commutator(&OpPoly::x(), &OpPoly::p1()), OpPoly::func(ih.clone()));
    assert_eq!(commutator(&OpPoly::y(), &OpPoly::p2()), OpPoly::func(ih));
    assert!(commutator(&OpPoly::x(), &OpPoly::p2()).is_zero());
}
