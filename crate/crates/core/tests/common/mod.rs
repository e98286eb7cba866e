#![allow(dead_code)]

use proptest::prelude::*;
use superint::symcore::{DPoly, GaussRat, Monomial};

pub fn rational() -> impl Strategy<Value = DPoly> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| DPoly::frac(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = DPoly> {
    (1i64..=9, 1i64..=6, any::<bool>()).prop_map(|(n, d, neg)| DPoly::frac(if neg { -n } else { n }, d))
}

pub fn gauss() -> impl Strategy<Value = GaussRat> {
    (-9i64..=9, 1i64..=6, -3i64..=3, 1i64..=4).prop_map(|(a, b, c, d)| {
        &GaussRat::frac(a, b) + &(&GaussRat::frac(c, d) * &GaussRat::i())
    })
}

/// Products of variables, `hbar`, parameters (possibly inverted) and jets.
pub fn monomial() -> impl Strategy<Value = DPoly> {
    let atom = prop_oneof![
        Just(DPoly::x()),
        Just(DPoly::y()),
        Just(DPoly::z()),
        Just(DPoly::hbar()),
        Just(DPoly::param("sigma")),
        Just(DPoly::param("a1")),
        (0i32..=3).prop_map(|k| DPoly::jet("V1", k)),
        (-1i32..=2).prop_map(|k| DPoly::jet("V2", k)),
        (0i32..=3).prop_map(|k| DPoly::jet("F", k)),
    ];
    let inverse = prop_oneof![Just("sigma"), Just("Lambda"), Just("cgamma")]
        .prop_map(|p| DPoly::param(p).powi(-1).unwrap());
    (
        prop::collection::vec((atom, 1u32..=3), 0..4),
        prop::option::weighted(0.2, inverse),
    )
        .prop_map(|(fs, inv)| {
            let mut m = fs.into_iter().fold(DPoly::one(), |acc, (a, e)| &acc * &a.pow(e));
            if let Some(i) = inv {
                m = &m * &i;
            }
            m
        })
}

pub fn poly() -> impl Strategy<Value = DPoly> {
    prop::collection::vec((gauss(), monomial()), 0..6).prop_map(|ts| {
        ts.into_iter().fold(DPoly::zero(), |acc, (c, m)| {
            let (mono, _): (&Monomial, _) = match m.as_term() {
                Some(t) => t,
                None => return acc,
            };
            &acc + &DPoly::term(mono.clone(), c)
        })
    })
}
