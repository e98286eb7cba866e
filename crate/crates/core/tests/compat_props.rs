mod common;

use common::{nonzero_rational, rational};
use proptest::prelude::*;
use superint::compat::{
    chain_eliminate, classify, reduce_trivial, solve_chain, table_w, ChainSystem,
};
use superint::deteq::{AMap, IntegralAnsatz};
use superint::symcore::{DPoly, Var};

/// `p(x, y) + q(x, y) V1^(k) + r(x, y) V2^(k)`.
fn linear_unknown() -> impl Strategy<Value = DPoly> {
    let xy = || {
        (rational(), 0u32..=2, 0u32..=2)
            .prop_map(|(c, a, b)| &(&c * &DPoly::x().pow(a)) * &DPoly::y().pow(b))
    };
    (xy(), xy(), 0i32..=2, xy(), 0i32..=2).prop_map(|(p, q, k1, r, k2)| {
        &(&p + &(&q * &DPoly::jet("V1", k1))) + &(&r * &DPoly::jet("V2", k2))
    })
}

fn rhs_of(f: &[DPoly]) -> Vec<DPoly> {
    let n = f.len();
    (0..=n)
        .map(|j| {
            let mut g = DPoly::zero();
            if j > 0 {
                g += f[j - 1].differentiate(Var::X);
            }
            if j < n {
                g += f[j].differentiate(Var::Y);
            }
            g
        })
        .collect()
}

fn unknowns(n: usize) -> Vec<String> {
    (0..n).map(|j| format!("f_{j}_2")).collect()
}

fn scaled(ans: &IntegralAnsatz, c: &DPoly) -> IntegralAnsatz {
    let a: AMap = ans.a.iter().map(|(k, v)| (*k, v * c)).collect();
    IntegralAnsatz::new(ans.n, a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn elimination_kills_consistent_chains(f in prop::collection::vec(linear_unknown(), 2..=6)) {
        let c = ChainSystem::new(rhs_of(&f), unknowns(f.len()), 1).unwrap();
        prop_assert!(chain_eliminate(&c).unwrap().is_zero());
    }

    #[test]
    fn solutions_resubstitute(f in prop::collection::vec(linear_unknown(), 1..=4)) {
        let c = ChainSystem::new(rhs_of(&f), unknowns(f.len()), 1).unwrap();
        let s = solve_chain(&c).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(s.conditions.is_empty(), "{:?}", s.conditions);
        prop_assert!(c.defects(&s.f).iter().all(DPoly::is_zero));
    }

    #[test]
    fn classification_ignores_overall_scale(
        n in 3usize..=6,
        picks in prop::collection::vec(any::<bool>(), 28),
        c in nonzero_rational(),
    ) {
        let keys: Vec<_> = IntegralAnsatz::full(n).a.keys().copied().collect();
        let terms: Vec<_> = keys.iter().zip(&picks).filter(|(_, &p)| p).map(|(k, _)| *k).collect();
        prop_assume!(!terms.is_empty());
        let ans = IntegralAnsatz::with_terms(n, &terms).unwrap();
        prop_assert_eq!(classify(&ans).class, classify(&scaled(&ans, &c)).class);
    }

    #[test]
    fn trivial_reduction_is_idempotent(
        n in prop::sample::select(vec![6usize, 7, 8, 9, 10]),
        picks in prop::collection::vec(any::<bool>(), 40),
    ) {
        let table: Vec<_> = table_w(n).unwrap().into_iter().collect();
        let terms: Vec<_> = table.iter().zip(&picks).filter(|(_, &p)| p).map(|(k, _)| *k).collect();
        prop_assume!(!terms.is_empty());
        let once = reduce_trivial(&IntegralAnsatz::with_terms(n, &terms).unwrap());
        prop_assume!(!once.is_empty());
        let twice = reduce_trivial(&once.clone().into_ansatz().unwrap());
        prop_assert_eq!(twice.a, once.a);
        prop_assert!(twice.removed.is_empty());
    }
}
