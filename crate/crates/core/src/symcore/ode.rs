//! Reduction of differential polynomials modulo ODE relations.

use std::collections::BTreeMap;

use super::dpoly::DPoly;
use super::symbol::{Deps, Jet, Symbol, Var};
use crate::error::{Error, Result};

/// `J^(order) = rhs`, where `rhs` only involves jets of `J` below `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeRelation {
    pub name: String,
    pub deps: Deps,
    pub var: Var,
    pub order: i32,
    pub rhs: DPoly,
}

impl OdeRelation {
    /// Solve `eq = 0` for the highest derivative of `name`.
    pub fn from_equation(eq: &DPoly, name: &str, deps: Deps) -> Result<Self> {
        let var = deps
            .single()
            .ok_or_else(|| Error::BadOde(format!("{name} must depend on a single variable")))?;
        let order = eq
            .jets()
            .iter()
            .filter(|j| &*j.name == name && j.deps == deps)
            .map(|j| j.orders[0])
            .max()
            .ok_or_else(|| Error::BadOde(format!("{name} does not occur in the equation")))?;
        let top = Symbol::Jet(Jet::new(name, deps, [order, 0]));
        if eq.degree_in(&top) != 1 {
            return Err(Error::BadOde(format!(
                "highest derivative of {name} is not linear"
            )));
        }
        let lead = eq.coeff_of(&top, 1);
        let inv = lead
            .inverse_term()
            .ok_or_else(|| Error::NotInvertible(lead.to_string()))?;
        let rest = eq.coeff_of(&top, 0);
        Ok(OdeRelation {
            name: name.to_string(),
            deps,
            var,
            order,
            rhs: -&(&rest * &inv),
        })
    }

    pub fn jet(&self, order: i32) -> Jet {
        Jet::new(&self.name, self.deps, [order, 0])
    }

    fn matches(&self, j: &Jet) -> bool {
        &*j.name == self.name.as_str() && j.deps == self.deps
    }

    /// The relation as an expression that vanishes: `J^(n) - rhs`.
    pub fn as_equation(&self) -> DPoly {
        &DPoly::from_jet(self.jet(self.order)) - &self.rhs
    }

    /// Replacement table for jets of order `order..=max`.
    fn table(&self, max: i32) -> BTreeMap<i32, DPoly> {
        let mut t = BTreeMap::new();
        t.insert(self.order, self.rhs.clone());
        let top = Symbol::Jet(self.jet(self.order));
        for m in self.order + 1..=max {
            let d = t[&(m - 1)].differentiate(self.var);
            let r = d.subs(&top, &self.rhs);
            t.insert(m, r);
        }
        t
    }
}

/// Rewrite every jet at or above each relation's order.
pub fn reduce_mod_ode(p: &DPoly, rels: &[OdeRelation]) -> DPoly {
    let mut cur = p.clone();
    // Relations may feed each other; iterate to a fixed point.
    for _ in 0..=rels.len() {
        let mut changed = false;
        for rel in rels {
            let max = cur
                .jets()
                .iter()
                .filter(|j| rel.matches(j))
                .map(|j| j.orders[0])
                .max();
            let Some(max) = max else { continue };
            if max < rel.order {
                continue;
            }
            let table = rel.table(max);
            cur = cur.substitute(|s| match s {
                Symbol::Jet(j) if rel.matches(j) && j.orders[0] >= rel.order => {
                    Some(table[&j.orders[0]].clone())
                }
                _ => None,
            });
            changed = true;
        }
        if !changed {
            break;
        }
    }
    cur
}

/// Pseudo-reduction by `lead*J^(n) + rest = 0` with a possibly
/// non-invertible `lead`. Returns `(k, r)` with `lead^k * p ≡ r`.
pub fn pseudo_reduce(p: &DPoly, eq: &DPoly, name: &str, deps: Deps) -> Result<(u32, DPoly)> {
    let var = deps
        .single()
        .ok_or_else(|| Error::BadOde(format!("{name} must depend on a single variable")))?;
    let order = eq
        .jets()
        .iter()
        .filter(|j| &*j.name == name && j.deps == deps)
        .map(|j| j.orders[0])
        .max()
        .ok_or_else(|| Error::BadOde(format!("{name} does not occur in the equation")))?;
    let top = Symbol::Jet(Jet::new(name, deps, [order, 0]));
    if eq.degree_in(&top) != 1 {
        return Err(Error::BadOde(format!(
            "highest derivative of {name} is not linear"
        )));
    }
    let lead = eq.coeff_of(&top, 1);
    let mut cur = p.clone();
    let mut k = 0u32;
    loop {
        let max = cur
            .jets()
            .iter()
            .filter(|j| &*j.name == name && j.deps == deps)
            .map(|j| j.orders[0])
            .max();
        let Some(m) = max else { break };
        if m < order {
            break;
        }
        let mut d = eq.clone();
        for _ in order..m {
            d = d.differentiate(var);
        }
        let tm = Symbol::Jet(Jet::new(name, deps, [m, 0]));
        // d = lead*J^(m) + rm
        let rm = d.coeff_of(&tm, 0);
        debug_assert_eq!(d.coeff_of(&tm, 1), lead);
        let e = cur.degree_in(&tm);
        let neg_rm = -&rm;
        let mut next = DPoly::zero();
        for kk in 0..=e {
            let ck = cur.coeff_of(&tm, kk);
            if ck.is_zero() {
                continue;
            }
            next += &(&ck * &lead.pow((e - kk) as u32)) * &neg_rm.pow(kk as u32);
        }
        cur = next;
        k += e as u32;
    }
    Ok((k, cur))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1_rel() -> OdeRelation {
        // P1'' = 6 P1^2 + u, with u the independent variable z
        let eq =
            &DPoly::jet("P1", 2) - &(&DPoly::jet("P1", 0).pow(2).scale(&6.into()) + &DPoly::z());
        OdeRelation::from_equation(&eq, "P1", Deps::Z).unwrap()
    }

    #[test]
    fn direct_substitution() {
        let r = reduce_mod_ode(&DPoly::jet("P1", 2), &[p1_rel()]);
        assert_eq!(
            r,
            &DPoly::jet("P1", 0).pow(2).scale(&6.into()) + &DPoly::z()
        );
    }

    #[test]
    fn third_derivative() {
        let r = reduce_mod_ode(&DPoly::jet("P1", 3), &[p1_rel()]);
        let expect =
            &(&DPoly::jet("P1", 0) * &DPoly::jet("P1", 1)).scale(&12.into()) + &DPoly::one();
        assert_eq!(r, expect);
    }

    #[test]
    fn below_order_unchanged() {
        let p = DPoly::jet("P1", 1);
        assert_eq!(reduce_mod_ode(&p, &[p1_rel()]), p);
    }

    #[test]
    fn non_invertible_lead_rejected() {
        let eq = &(&DPoly::z() * &DPoly::jet("F", 2)) - &DPoly::jet("F", 0);
        assert!(matches!(
            OdeRelation::from_equation(&eq, "F", Deps::Z),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn pseudo_reduction_clears_lead() {
        let eq = &(&DPoly::z() * &DPoly::jet("F", 2)) - &DPoly::jet("F", 0);
        let (k, r) = pseudo_reduce(&DPoly::jet("F", 3), &eq, "F", Deps::Z).unwrap();
        assert_eq!(k, 2);
        assert!(r.max_jet_order("F").unwrap() < 2);
        // z^2 F''' with z F''' = F' - F'' and z F'' = F gives z(F' - F'') = z F' - F
        assert_eq!(
            r,
            &(&DPoly::z() * &DPoly::jet("F", 1)) - &DPoly::jet("F", 0)
        );
    }
}
