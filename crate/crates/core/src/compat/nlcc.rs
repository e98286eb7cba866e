use std::collections::BTreeMap;

use serde::Serialize;

use super::chain::{chain_eliminate, level_chain};
use super::constants::{solve_constants, ConstSolution};
use super::solve::try_solve_chain;
use crate::deteq::IntegralAnsatz;
use crate::error::{Error, Result};
use crate::symcore::{pseudo_reduce, DPoly, Deps, Jet, Symbol, Var};

/// A condition `E(x, y) = 0` on a separable potential, written as
/// `Σ y^k A_k(x) + Σ x^k B_k(y) + P(x, y) + entangled`, where `A_k` carry
/// the `V1` jets, `B_k` the `V2` jets and `entangled` terms carry both.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Separated {
    pub entangled: DPoly,
    pub a: BTreeMap<i32, DPoly>,
    pub b: BTreeMap<i32, DPoly>,
    pub polynomial: DPoly,
}

fn side(s: &Symbol) -> Option<Var> {
    match s {
        Symbol::Var(v) => Some(*v),
        Symbol::Jet(j) => match j.deps {
            Deps::X => Some(Var::X),
            Deps::Y => Some(Var::Y),
            Deps::Z => Some(Var::Z),
            Deps::XY => None,
        },
        _ => None,
    }
}

fn is_constant_symbol(s: &Symbol) -> bool {
    matches!(s, Symbol::Param(_) | Symbol::Hbar)
}

fn is_jet_on(s: &Symbol, v: Var) -> bool {
    matches!(s, Symbol::Jet(_)) && side(s) == Some(v)
}

pub fn separate(e: &DPoly) -> Separated {
    let mut out = Separated::default();
    let xs = Symbol::Var(Var::X);
    let ys = Symbol::Var(Var::Y);
    for (m, c) in e.terms() {
        let mut jx = false;
        let mut jy = false;
        let mut other = false;
        for (s, _) in m.factors() {
            if is_jet_on(s, Var::X) {
                jx = true;
            } else if is_jet_on(s, Var::Y) {
                jy = true;
            } else if !is_constant_symbol(s) && side(s).is_none() {
                other = true;
            }
        }
        match (jx, jy, other) {
            (true, false, false) => {
                let k = m.exponent(&ys);
                out.a
                    .entry(k)
                    .or_default()
                    .add_term(m.with_delta(&ys, -k), c.clone());
            }
            (false, true, false) => {
                let k = m.exponent(&xs);
                out.b
                    .entry(k)
                    .or_default()
                    .add_term(m.with_delta(&xs, -k), c.clone());
            }
            (false, false, false) => out.polynomial.add_term(m.clone(), c.clone()),
            _ => out.entangled.add_term(m.clone(), c.clone()),
        }
    }
    out.a.retain(|_, p| !p.is_zero());
    out.b.retain(|_, p| !p.is_zero());
    out
}

/// Highest total degree in jets over any term.
fn jet_degree(p: &DPoly) -> i32 {
    p.terms()
        .map(|(m, _)| {
            m.factors()
                .iter()
                .filter(|(s, _)| matches!(s, Symbol::Jet(_)))
                .map(|(_, e)| *e)
                .sum()
        })
        .max()
        .unwrap_or(0)
}

/// Coefficients of `p` with respect to everything but parameters and `hbar`.
pub fn constant_coefficients(p: &DPoly) -> Vec<DPoly> {
    p.collect_by(|s| !is_constant_symbol(s))
        .into_values()
        .filter(|c| !c.is_zero())
        .collect()
}

/// Coefficients of the jet-carrying terms only.
fn jet_coefficients(p: &DPoly) -> Vec<DPoly> {
    let jets = p.filter(|m, _| m.factors().iter().any(|(s, _)| matches!(s, Symbol::Jet(_))));
    constant_coefficients(&jets)
}

fn degree(p: &DPoly, v: Var) -> i32 {
    p.degree_in(&Symbol::Var(v)).max(0)
}

/// One-variable ODEs implied by a separated condition: `A_k(x) = p_k(x)`
/// with `deg p_k <= D_x`, where `D_x` bounds the `x`-degree of everything
/// not carrying `V1`; the `p_k` coefficients are fresh constants.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SeparatedOdes {
    pub x: Vec<(i32, DPoly)>,
    pub y: Vec<(i32, DPoly)>,
    pub constants: Vec<String>,
}

fn polynomial_rhs(k: i32, deg: i32, v: Var, tag: &str, names: &mut Vec<String>) -> DPoly {
    let mut p = DPoly::zero();
    for a in 0..=deg {
        let name = format!("{tag}{k}_{a}");
        p += &DPoly::param(&name) * &DPoly::var(v).pow(a as u32);
        names.push(name);
    }
    p
}

pub fn separated_odes(s: &Separated) -> SeparatedOdes {
    let kb = s.b.keys().copied().max().unwrap_or(0);
    let ka = s.a.keys().copied().max().unwrap_or(0);
    let dx = kb.max(degree(&s.polynomial, Var::X));
    let dy = ka.max(degree(&s.polynomial, Var::Y));
    let mut out = SeparatedOdes::default();
    for (&k, a) in &s.a {
        let rhs = polynomial_rhs(k, dx, Var::X, "sx", &mut out.constants);
        out.x.push((k, a - &rhs));
    }
    for (&k, b) in &s.b {
        let rhs = polynomial_rhs(k, dy, Var::Y, "sy", &mut out.constants);
        out.y.push((k, b - &rhs));
    }
    out
}

/// The nonlinear member of highest order, if any.
fn principal(list: &[(i32, DPoly)]) -> Option<usize> {
    list.iter()
        .enumerate()
        .filter(|(_, (_, p))| jet_degree(p) >= 2)
        .max_by_key(|(_, (_, p))| {
            let ord = p
                .jets()
                .iter()
                .map(|j| j.orders[0] + j.orders[1])
                .max()
                .unwrap_or(0);
            (ord, jet_degree(p))
        })
        .map(|(i, _)| i)
}

/// Nonlinear compatibility condition at a given level.
#[derive(Clone, Debug, PartialEq)]
pub struct Nlcc {
    pub n: usize,
    pub level: usize,
    /// The ansatz with all lower levels resolved.
    pub resolved: IntegralAnsatz,
    pub constants: Vec<String>,
    /// Conditions left over while solving lower levels.
    pub lower_conditions: Vec<DPoly>,
    /// The eliminated condition before fixing any constant.
    pub condition: DPoly,
    /// Constants fixed so that no linear ODE and no entangled term remains.
    pub fixed: ConstSolution,
    pub separated: Separated,
    pub odes: SeparatedOdes,
    /// The principal x- and y-conditions.
    pub x_part: DPoly,
    pub y_part: DPoly,
}

/// Solve levels `1..level` by quadrature and eliminate the chain at `level`.
pub fn nlcc(ans: &IntegralAnsatz, level: usize) -> Result<Nlcc> {
    if level < 2 || level > ans.top_level() {
        return Err(Error::Invalid(format!(
            "NLCC level must lie in 2..={}",
            ans.top_level()
        )));
    }
    let mut cur = ans.clone();
    cur.f.retain(|&(_, k), _| k == 0);
    let mut constants = Vec::new();
    let mut lower_conditions = Vec::new();
    // Constants multiplying terms a quadrature cannot absorb must vanish.
    let mut fixed = ConstSolution::default();
    for l in 1..level {
        let sol = loop {
            match try_solve_chain(&level_chain(&cur, l)?) {
                Ok(sol) => break sol,
                Err(u) => {
                    let free: Vec<String> = constants
                        .iter()
                        .filter(|c| !fixed.values.contains_key(*c))
                        .cloned()
                        .collect();
                    let step = solve_constants(&constant_coefficients(&u.0), &free);
                    if step.values.is_empty() {
                        return Err(u.into_error(l));
                    }
                    for f in cur.f.values_mut() {
                        *f = step.apply(f);
                    }
                    lower_conditions = lower_conditions.iter().map(|c| step.apply(c)).collect();
                    fixed.extend(step);
                }
            }
        };
        for (j, f) in sol.f.into_iter().enumerate() {
            cur.f.insert((j, 2 * l), f);
        }
        constants.extend(sol.constants);
        lower_conditions.extend(sol.conditions);
    }
    let condition = chain_eliminate(&level_chain(&cur, level)?)?;

    // Entangled terms and linear one-variable conditions would make the
    // potential satisfy a linear ODE; fix constants to remove them. Fixing
    // some constants can linearize other conditions, so repeat.
    let mut e = fixed.apply(&condition);
    loop {
        let sep = separate(&e);
        let mut eqs = constant_coefficients(&sep.entangled);
        for c in &lower_conditions {
            eqs.extend(constant_coefficients(&fixed.apply(c)));
        }
        for part in [&sep.a, &sep.b] {
            let list: Vec<(i32, DPoly)> = part.iter().map(|(k, p)| (*k, p.clone())).collect();
            let keep = principal(&list);
            for (i, (_, p)) in list.iter().enumerate() {
                if Some(i) != keep && jet_degree(p) < 2 {
                    eqs.extend(jet_coefficients(p));
                }
            }
        }
        let free: Vec<String> = constants
            .iter()
            .filter(|c| !fixed.values.contains_key(*c))
            .cloned()
            .collect();
        let step = solve_constants(&eqs, &free);
        let progress = !step.values.is_empty();
        fixed.extend(step);
        e = fixed.apply(&condition);
        if !progress {
            break;
        }
    }
    let separated = separate(&e);
    let odes = separated_odes(&separated);
    let pick = |list: &[(i32, DPoly)]| {
        principal(list)
            .map(|i| list[i].1.clone())
            .unwrap_or_default()
    };
    let x_part = pick(&odes.x);
    let y_part = pick(&odes.y);
    for l in 1..level {
        for j in 0..=(ans.n - 2 * l) {
            if let Some(f) = cur.f.get_mut(&(j, 2 * l)) {
                *f = fixed.apply(f);
            }
        }
    }
    let lower_conditions = lower_conditions
        .iter()
        .map(|c| fixed.apply(c))
        .filter(|c| !c.is_zero())
        .collect();
    Ok(Nlcc {
        n: ans.n,
        level,
        resolved: cur,
        constants,
        lower_conditions,
        condition,
        fixed,
        separated,
        odes,
        x_part,
        y_part,
    })
}

/// How a potential component is expressed through a catalog function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// `V1 = hbar² F'(x)`.
    FPrime,
    /// `V1 = U(x)`.
    Direct,
}

/// Outcome of matching a generated ODE against a catalog ODE.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchReport {
    pub matched: bool,
    /// The generated ODE rewritten in the catalog's dependent variable.
    pub generated: String,
    pub generated_order: i32,
    pub catalog_order: i32,
    /// Power of the catalog ODE's leading coefficient used in the reduction.
    pub multiplier_power: u32,
    /// Constant assignments, in the order they were found.
    pub mapping: Vec<(String, String)>,
    pub unresolved: Vec<String>,
}

/// Rewrite jets of `V1` (over x) as jets of `dep` (over z). Antiderivatives
/// the profile cannot absorb are an error.
pub fn to_profile(p: &DPoly, dep: &str, profile: Profile) -> Result<DPoly> {
    let floor = match profile {
        Profile::FPrime => -1,
        Profile::Direct => 0,
    };
    if let Some(j) = p
        .jets()
        .into_iter()
        .find(|j| j.orders.iter().any(|&o| o < floor))
    {
        return Err(Error::Quadrature {
            level: 0,
            term: j.to_string(),
        });
    }
    let h2 = DPoly::hbar().pow(2);
    Ok(p.substitute(|s| match s {
        Symbol::Var(Var::X) => Some(DPoly::z()),
        Symbol::Jet(j) if &*j.name == "V1" => {
            let k = j.orders[0];
            Some(match profile {
                Profile::FPrime => &h2 * &DPoly::from_jet(Jet::new(dep, Deps::Z, [k + 1, 0])),
                Profile::Direct => DPoly::from_jet(Jet::new(dep, Deps::Z, [k, 0])),
            })
        }
        _ => None,
    }))
}

/// Check that `generated` (in `V1` and x) vanishes on every solution of
/// `catalog = 0` for a suitable choice of the constants in `unknowns`.
pub fn match_ode(
    generated: &DPoly,
    catalog: &DPoly,
    dep: &str,
    profile: Profile,
    unknowns: &[String],
) -> Result<MatchReport> {
    let g = to_profile(generated, dep, profile)?;
    let catalog_order = catalog
        .max_jet_order(dep)
        .ok_or_else(|| Error::BadOde(format!("{dep} does not occur")))?;
    let generated_order = g.max_jet_order(dep).unwrap_or(i32::MIN);
    let (k, r) = pseudo_reduce(&g, catalog, dep, Deps::Z)?;
    let eqs = constant_coefficients(&r);
    let sol = solve_constants(&eqs, unknowns);
    Ok(MatchReport {
        matched: sol.is_consistent(),
        generated: g.to_string(),
        generated_order,
        catalog_order,
        multiplier_power: k,
        mapping: sol
            .order
            .iter()
            .map(|u| (u.clone(), sol.values[u].to_string()))
            .collect(),
        unresolved: sol.remaining.iter().map(|e| e.to_string()).collect(),
    })
}

/// Parameters of `p` in first-seen order of `preferred`, then the rest.
pub fn ordered_params(p: &DPoly, preferred: &[String]) -> Vec<String> {
    let all = p.params();
    let mut out: Vec<String> = preferred
        .iter()
        .filter(|s| all.contains(*s))
        .cloned()
        .collect();
    out.extend(all.into_iter().filter(|s| !preferred.contains(s)));
    out
}
