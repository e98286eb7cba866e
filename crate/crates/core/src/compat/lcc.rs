use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use super::chain::{chain_eliminate, level_chain};
use crate::deteq::IntegralAnsatz;
use crate::symcore::{DPoly, Symbol, Var};

/// The linear compatibility condition and its one-variable pieces.
#[derive(Clone, Debug, PartialEq)]
pub struct Lcc {
    pub full: DPoly,
    pub tau1: DPoly,
    pub ups1: DPoly,
    pub tau2: DPoly,
    pub ups2: DPoly,
    /// Coefficients of `y^k` (k >= 2) in `∂x² full`, and of `x^k` in `∂y² full`.
    /// Empty whenever the degree argument holds.
    pub extras: Vec<(Var, i32, DPoly)>,
}

impl Lcc {
    pub fn x_side_vanishes(&self) -> bool {
        self.tau1.is_zero()
            && self.ups1.is_zero()
            && self.extras.iter().all(|e| e.0 != Var::X || e.2.is_zero())
    }

    pub fn y_side_vanishes(&self) -> bool {
        self.tau2.is_zero()
            && self.ups2.is_zero()
            && self.extras.iter().all(|e| e.0 != Var::Y || e.2.is_zero())
    }
}

fn split_linear(p: &DPoly, v: Var) -> (DPoly, DPoly, Vec<(i32, DPoly)>) {
    let s = Symbol::Var(v);
    let mut by: BTreeMap<i32, DPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = m.exponent(&s);
        by.entry(e)
            .or_default()
            .add_term(m.with_delta(&s, -e), c.clone());
    }
    let t = by.remove(&0).unwrap_or_default();
    let u = by.remove(&1).unwrap_or_default();
    (t, u, by.into_iter().filter(|(_, p)| !p.is_zero()).collect())
}

/// Eliminate the level-1 chain and split off the `V1`- and `V2`-only parts.
pub fn lcc(ans: &IntegralAnsatz) -> Lcc {
    let mut base = ans.clone();
    base.f.retain(|&(_, k), _| k == 0);
    let chain = level_chain(&base, 1).expect("level 1 exists for N >= 1");
    let full = chain_eliminate(&chain).expect("level-1 chain only holds leading data");
    let (tau1, ups1, ex1) = split_linear(&full.diff_n(Var::X, 2), Var::Y);
    let (tau2, ups2, ex2) = split_linear(&full.diff_n(Var::Y, 2), Var::X);
    let mut extras: Vec<(Var, i32, DPoly)> = ex1.into_iter().map(|(e, p)| (Var::X, e, p)).collect();
    extras.extend(ex2.into_iter().map(|(e, p)| (Var::Y, e, p)));
    Lcc {
        full,
        tau1,
        ups1,
        tau2,
        ups2,
        extras,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExoticClass {
    #[serde(rename = "doubly-exotic")]
    DoublyExotic,
    #[serde(rename = "singly-exotic-x")]
    SinglyExoticX,
    #[serde(rename = "singly-exotic-y")]
    SinglyExoticY,
    #[serde(rename = "standard")]
    Standard,
}

impl ExoticClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ExoticClass::DoublyExotic => "doubly-exotic",
            ExoticClass::SinglyExoticX => "singly-exotic-x",
            ExoticClass::SinglyExoticY => "singly-exotic-y",
            ExoticClass::Standard => "standard",
        }
    }
}

impl std::fmt::Display for ExoticClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub class: ExoticClass,
    /// The τ/υ pieces that decided the class.
    pub witness: Lcc,
}

pub fn classify(ans: &IntegralAnsatz) -> Classification {
    let l = lcc(ans);
    let class = match (l.x_side_vanishes(), l.y_side_vanishes()) {
        (true, true) => ExoticClass::DoublyExotic,
        (true, false) => ExoticClass::SinglyExoticX,
        (false, true) => ExoticClass::SinglyExoticY,
        (false, false) => ExoticClass::Standard,
    };
    Classification { class, witness: l }
}

fn expr(p: &DPoly) -> String {
    p.to_string()
}

/// Report JSON; `nlcc` holds the x- and y-parts when they were computed.
pub fn classification_report(
    ans: &IntegralAnsatz,
    c: &Classification,
    nlcc: Option<(&DPoly, &DPoly)>,
) -> serde_json::Value {
    let a: serde_json::Map<String, serde_json::Value> = ans
        .a
        .iter()
        .map(|(&(ea, m, n), v)| (format!("{ea},{m},{n}"), json!(expr(v))))
        .collect();
    let w = &c.witness;
    json!({
        "N": ans.n,
        "A": a,
        "class": c.class.as_str(),
        "tau1": expr(&w.tau1),
        "ups1": expr(&w.ups1),
        "tau2": expr(&w.tau2),
        "ups2": expr(&w.ups2),
        "nlcc_x": nlcc.map(|p| expr(p.0)),
        "nlcc_y": nlcc.map(|p| expr(p.1)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_one_n3_is_doubly_exotic() {
        let c = classify(&IntegralAnsatz::family_one(3));
        assert_eq!(c.class, ExoticClass::DoublyExotic);
        assert!(c.witness.full.is_zero());
    }

    #[test]
    fn family_two_n5_is_doubly_exotic() {
        assert_eq!(
            classify(&IntegralAnsatz::family_two(5)).class,
            ExoticClass::DoublyExotic
        );
    }

    #[test]
    fn generic_n3_is_standard() {
        let ans =
            IntegralAnsatz::with_terms(3, &[(3, 0, 0), (0, 3, 0), (1, 1, 1), (0, 0, 3)]).unwrap();
        let c = classify(&ans);
        assert_eq!(c.class, ExoticClass::Standard);
        assert!(!c.witness.tau1.is_zero());
        assert!(c.witness.tau1.max_jet_order("V1").unwrap() <= 5);
        assert!(c.witness.tau1.jets().iter().all(|j| &*j.name == "V1"));
    }
}
