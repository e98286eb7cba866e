use std::collections::BTreeSet;

use serde::Serialize;

use super::lcc::{classify, ExoticClass};
use crate::deteq::{AMap, IntegralAnsatz};
use crate::error::Result;
use crate::symcore::DPoly;

type Term = (usize, usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RemovalReason {
    /// `p1^(2a) p2^(2b)`: a polynomial in `H` and `X`.
    Trivial,
    /// `(p1^m p2^n)^2 = (p1^(2a) p2^(N-2a)) (p1^(2m-2a) p2^(2n-N+2a))`.
    Syzygy {
        square: (usize, usize),
        left: (usize, usize),
        right: (usize, usize),
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Removal {
    pub term: Term,
    pub reason: RemovalReason,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrivialReduction {
    pub n: usize,
    pub a: AMap,
    pub removed: Vec<Removal>,
}

impl TrivialReduction {
    pub fn terms(&self) -> BTreeSet<Term> {
        self.a.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn into_ansatz(self) -> Result<IntegralAnsatz> {
        IntegralAnsatz::new(self.n, self.a)
    }
}

pub fn is_pure_momentum(t: Term) -> bool {
    t.0 == 0
}

fn syzygy(n: usize, m: usize, k: usize) -> RemovalReason {
    // largest split keeping both factors even in each momentum
    let a = m.min(n / 2);
    RemovalReason::Syzygy {
        square: (m, k),
        left: (2 * a, n - 2 * a),
        right: (2 * m - 2 * a, 2 * k + 2 * a - n),
    }
}

/// Drop leading terms that only produce trivial integrals. For even N every
/// pure-momentum term goes: even powers are polynomials in `H` and `X`, odd
/// powers square to a product of two such terms. Odd N is left untouched.
pub fn reduce_trivial(ans: &IntegralAnsatz) -> TrivialReduction {
    let n = ans.n;
    let mut a = AMap::new();
    let mut removed = Vec::new();
    for (&t, v) in &ans.a {
        if n % 2 == 0 && is_pure_momentum(t) {
            let (_, m, k) = t;
            let reason = if m % 2 == 0 {
                RemovalReason::Trivial
            } else {
                syzygy(n, m, k)
            };
            removed.push(Removal { term: t, reason });
        } else {
            a.insert(t, v.clone());
        }
    }
    TrivialReduction { n, a, removed }
}

fn parse_table(s: &str) -> BTreeSet<Term> {
    s.split(';')
        .map(|t| {
            let v: Vec<usize> = t.split(',').map(|x| x.trim().parse().unwrap()).collect();
            (v[0], v[1], v[2])
        })
        .collect()
}

/// Leading terms of the doubly exotic `W_N` as tabulated for `N = 3..=10`.
pub fn table_w(n: usize) -> Option<BTreeSet<Term>> {
    let s = match n {
        3 => "0,3,0;0,0,3",
        4 => "0,4,0;0,0,4;0,2,2",
        5 => "0,5,0;0,0,5;0,3,2;0,2,3;1,2,2",
        6 => "0,6,0;0,0,6;0,3,3;0,2,4;0,4,2;2,2,2;1,2,3;1,3,2",
        7 => "0,7,0;0,0,7;3,2,2;2,3,2;2,2,3;1,4,2;1,2,4;1,3,3;0,5,2;0,2,5;0,4,3;0,3,4",
        8 => "0,8,0;0,0,8;4,2,2;3,2,3;3,3,2;2,4,2;2,2,4;2,3,3;1,5,2;1,2,5;1,4,3;1,3,4;0,6,2;0,2,6;0,3,5;0,5,3;0,4,4",
        9 => concat!(
            "0,9,0;0,0,9;5,2,2;4,2,3;4,3,2;3,4,2;3,2,4;3,3,3;2,5,2;2,2,5;2,4,3;2,3,4;",
            "1,6,2;1,2,6;1,5,3;1,3,5;1,4,4;0,7,2;0,2,7;0,4,5;0,5,4;0,3,6;0,6,3"
        ),
        10 => concat!(
            "0,10,0;0,0,10;6,2,2;5,2,3;5,3,2;4,4,2;4,2,4;4,3,3;3,5,2;3,2,5;3,4,3;3,3,4;",
            "2,6,2;2,2,6;1,6,3;1,3,6;1,7,2;1,2,7;1,5,4;1,4,5;0,2,8;0,8,2;0,3,7;0,7,3;0,4,6;0,6,4;0,5,5"
        ),
        _ => return None,
    };
    Some(parse_table(s))
}

/// Tabulated result of removing the trivial terms, for `N = 6, 8, 10`.
pub fn table_reduced(n: usize) -> Option<BTreeSet<Term>> {
    let s = match n {
        6 => "2,2,2;1,2,3;1,3,2",
        8 => "4,2,2;3,2,3;3,3,2;2,4,2;2,2,4;2,3,3;1,5,2;1,2,5;1,4,3;1,3,4",
        10 => concat!(
            "6,2,2;5,2,3;5,3,2;4,4,2;4,2,4;4,3,3;3,5,2;3,2,5;3,4,3;3,3,4;",
            "2,6,2;2,2,6;1,6,3;1,3,6;1,7,2;1,2,7;1,5,4;1,4,5"
        ),
        _ => return None,
    };
    Some(parse_table(s))
}

/// Single leading terms that leave the LCC identically zero, found by
/// classifying each term on its own.
pub fn doubly_exotic_terms(n: usize) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    for m in 0..=n {
        for k in 0..=n - m {
            let t = (n - m - k, m, k);
            let mut a = AMap::new();
            a.insert(t, DPoly::one());
            let ans = IntegralAnsatz::new(n, a).expect("nonzero");
            if classify(&ans).class == ExoticClass::DoublyExotic {
                out.insert(t);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ansatz_of(n: usize, terms: &BTreeSet<Term>) -> IntegralAnsatz {
        IntegralAnsatz::with_terms(n, &terms.iter().copied().collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn w4_reduces_to_nothing() {
        let r = reduce_trivial(&ansatz_of(4, &table_w(4).unwrap()));
        assert!(r.is_empty());
        assert!(r.clone().into_ansatz().is_err());
    }

    #[test]
    fn even_tables_reduce_to_tabulated_sets() {
        for n in [6, 8, 10] {
            let r = reduce_trivial(&ansatz_of(n, &table_w(n).unwrap()));
            assert_eq!(r.terms(), table_reduced(n).unwrap(), "N={n}");
        }
    }

    #[test]
    fn syzygies_detected() {
        let r = reduce_trivial(&ansatz_of(8, &table_w(8).unwrap()));
        let s: Vec<&Removal> = r
            .removed
            .iter()
            .filter(|x| matches!(x.reason, RemovalReason::Syzygy { .. }))
            .collect();
        assert_eq!(s.len(), 2);
        let w = r.removed.iter().find(|x| x.term == (0, 5, 3)).unwrap();
        assert_eq!(
            w.reason,
            RemovalReason::Syzygy {
                square: (5, 3),
                left: (8, 0),
                right: (2, 6)
            }
        );
        let r6 = reduce_trivial(&ansatz_of(6, &table_w(6).unwrap()));
        assert!(r6
            .removed
            .iter()
            .any(|x| x.term == (0, 3, 3) && matches!(x.reason, RemovalReason::Syzygy { .. })));
    }

    #[test]
    fn odd_order_untouched_and_idempotent() {
        let a = ansatz_of(7, &table_w(7).unwrap());
        let r = reduce_trivial(&a);
        assert_eq!(r.a, a.a);
        let b = ansatz_of(8, &table_w(8).unwrap());
        let once = reduce_trivial(&b).into_ansatz().unwrap();
        assert_eq!(reduce_trivial(&once).a, once.a);
    }

    #[test]
    fn lcc_term_sets_against_tables() {
        for n in 3..=9 {
            assert_eq!(doubly_exotic_terms(n), table_w(n).unwrap(), "N={n}");
        }
        let missing: BTreeSet<Term> = doubly_exotic_terms(10)
            .difference(&table_w(10).unwrap())
            .copied()
            .collect();
        assert_eq!(
            missing,
            [(2, 5, 3), (2, 3, 5), (2, 4, 4)].into_iter().collect()
        );
    }
}
