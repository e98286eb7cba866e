mod common;

use common::rational;
use proptest::prelude::*;
use superint::deteq::{counts, cross_check, determining_system, AMap, IntegralAnsatz};
use superint::symcore::DPoly;

fn ansatz(n: usize) -> impl Strategy<Value = IntegralAnsatz> {
    let keys: Vec<_> = IntegralAnsatz::full(n).a.keys().copied().collect();
    prop::collection::vec(prop::option::of(rational()), keys.len()).prop_filter_map(
        "all-zero ansatz",
        move |vals| {
            let a: AMap = keys
                .iter()
                .zip(vals)
                .filter_map(|(k, v)| v.map(|v| (*k, v)))
                .collect();
            IntegralAnsatz::new(n, a).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn formula_matches_commutator(ans in (2usize..=4).prop_flat_map(ansatz)) {
        let r = cross_check(&ans, usize::MAX);
        prop_assert!(r.agrees(), "{:?}", r.mismatches);
    }

    #[test]
    fn equation_count(n in 1usize..=9) {
        let sys = determining_system(&IntegralAnsatz::full(n));
        prop_assert_eq!(sys.equation_count(), counts(n).0);
    }

    #[test]
    fn level_zero_closes(ans in (2usize..=6).prop_flat_map(ansatz)) {
        let sys = superint::deteq::determining_system_to(&ans, 0);
        prop_assert!(sys.levels[0].iter().all(DPoly::is_zero));
    }
}
