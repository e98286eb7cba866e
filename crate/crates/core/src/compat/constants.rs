use std::collections::BTreeMap;

use crate::symcore::{DPoly, Symbol};

/// Values found for the unknown constants, and the equations that could
/// not be used to eliminate any of them.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ConstSolution {
    pub values: BTreeMap<String, DPoly>,
    /// Order in which unknowns were fixed.
    pub order: Vec<String>,
    pub remaining: Vec<DPoly>,
}

impl ConstSolution {
    pub fn apply(&self, p: &DPoly) -> DPoly {
        if self.values.is_empty() {
            return p.clone();
        }
        p.substitute(|s| match s {
            Symbol::Param(n) => self.values.get(&**n).cloned(),
            _ => None,
        })
    }

    /// Compose with a solution found after applying `self`.
    pub fn extend(&mut self, later: ConstSolution) {
        for v in self.values.values_mut() {
            *v = later.apply(v);
        }
        for u in later.order {
            let v = later.values[&u].clone();
            self.values.insert(u.clone(), v);
            self.order.push(u);
        }
        self.remaining = later.remaining;
    }

    pub fn is_consistent(&self) -> bool {
        self.remaining.is_empty()
    }
}

/// A single term in numbers, `hbar` and parameters outside `unknowns`,
/// treated as nonzero.
fn safe_divisor(c: &DPoly, unknowns: &[String]) -> Option<DPoly> {
    let (m, _) = c.as_term()?;
    let ok = m.factors().iter().all(|(s, _)| match s {
        Symbol::Hbar => true,
        Symbol::Param(n) => !unknowns.iter().any(|u| **u == **n),
        _ => false,
    });
    if ok {
        c.inverse_term()
    } else {
        None
    }
}

/// Eliminate unknown constants from polynomial equations, one linear
/// occurrence at a time, preferring unknowns earlier in `unknowns`.
/// Equations that are a single term force one of their unknowns to zero.
pub fn solve_constants(eqs: &[DPoly], unknowns: &[String]) -> ConstSolution {
    let mut sol = ConstSolution::default();
    let mut cur: Vec<DPoly> = eqs.iter().filter(|e| !e.is_zero()).cloned().collect();
    let mut free: Vec<String> = unknowns.to_vec();
    loop {
        cur.retain(|e| !e.is_zero());
        cur.sort_by_key(|e| (e.len(), e.to_string()));
        cur.dedup();
        let mut step: Option<(String, DPoly)> = None;
        'search: for u in &free {
            let s = Symbol::param(u);
            for e in &cur {
                if e.degree_in(&s) != 1 {
                    continue;
                }
                let lead = e.coeff_of(&s, 1);
                if let Some(inv) = safe_divisor(&lead, &free) {
                    let rest = e.coeff_of(&s, 0);
                    step = Some((u.clone(), -&(&rest * &inv)));
                    break 'search;
                }
            }
        }
        if step.is_none() {
            // c * u^k * (nonzero) = 0
            'mono: for e in &cur {
                if let Some((m, _)) = e.as_term() {
                    for (s, k) in m.factors() {
                        if let Symbol::Param(n) = s {
                            if *k > 0 && free.iter().any(|u| **u == **n) {
                                step = Some((n.to_string(), DPoly::zero()));
                                break 'mono;
                            }
                        }
                    }
                }
            }
        }
        let Some((u, val)) = step else { break };
        let s = Symbol::param(&u);
        for v in sol.values.values_mut() {
            *v = v.subs(&s, &val);
        }
        cur = cur.iter().map(|e| e.subs(&s, &val)).collect();
        sol.values.insert(u.clone(), val);
        sol.order.push(u.clone());
        free.retain(|f| *f != u);
    }
    sol.remaining = cur;
    sol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse_expr;

    #[test]
    fn triangular_system() {
        let eqs: Vec<DPoly> = ["2*k1_0 - a", "k1_1 - k1_0*hbar^2 + 1", "k1_2^2"]
            .iter()
            .map(|s| parse_expr(s).unwrap())
            .collect();
        let names: Vec<String> = ["k1_0", "k1_1", "k1_2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let sol = solve_constants(&eqs, &names);
        assert!(sol.is_consistent(), "{:?}", sol.remaining);
        assert_eq!(sol.values["k1_0"], parse_expr("a/2").unwrap());
        assert_eq!(sol.values["k1_1"], parse_expr("a*hbar^2/2 - 1").unwrap());
        assert!(sol.values["k1_2"].is_zero());
    }

    #[test]
    fn leftover_relation_reported() {
        let eqs = vec![parse_expr("a*b - 1").unwrap()];
        let sol = solve_constants(&eqs, &["k1_0".to_string()]);
        assert_eq!(sol.remaining.len(), 1);
    }
}
