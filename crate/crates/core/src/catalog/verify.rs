//! Substitute a catalog potential into the compatibility conditions.

use std::collections::BTreeMap;

use serde::Serialize;

use super::CatalogEntry;
use crate::compat::{constant_coefficients, level_chain, nlcc, solve_chain, solve_constants};
use crate::error::{Error, Result};
use crate::symcore::{parse_expr, pseudo_reduce, DPoly, Deps, Jet, Monomial, Symbol, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelStatus {
    /// No condition at this level, before substituting anything.
    VanishesIdentically,
    Vanishes,
    VanishesUnderConstraints,
    Fails,
    /// The conditions at this level could not be generated.
    Unsupported,
}

impl LevelStatus {
    pub fn passes(self) -> bool {
        matches!(
            self,
            LevelStatus::VanishesIdentically
                | LevelStatus::Vanishes
                | LevelStatus::VanishesUnderConstraints
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelCheck {
    pub level: usize,
    pub status: LevelStatus,
    /// Integration constants fixed by the substitution.
    pub mapping: Vec<(String, String)>,
    /// Conditions on the potential's own constants.
    pub constraints: Vec<String>,
    /// Powers of the catalog ODEs' leading coefficients used in reduction.
    pub multiplier_power: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Constraints violated by the entry's literal choice of constants.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub literal_residuals: Vec<String>,
    #[serde(skip)]
    values: BTreeMap<String, DPoly>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub id: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub max_level: usize,
    pub levels: Vec<LevelCheck>,
}

impl VerifyReport {
    /// Every checked level passes (unsupported levels count against).
    pub fn passes(&self) -> bool {
        self.levels.iter().all(|l| l.status.passes())
    }
}

/// One half of the potential: `V(v)^(k) -> scale * D^(shift + k)` with `D`
/// subject to `ode`.
struct Side {
    var: Var,
    deps: Deps,
    potential: &'static str,
    dep: String,
    ode: DPoly,
    scale: DPoly,
    shift: i32,
    /// Catalog parameters that may be solved for.
    params: Vec<String>,
}

const SEED_PARAMS: &[&str] = &["cgamma", "sgamma", "omega1", "omega2"];

fn parse_map(m: &BTreeMap<String, String>) -> Result<BTreeMap<String, DPoly>> {
    m.iter()
        .map(|(k, v)| Ok((k.clone(), parse_expr(v)?)))
        .collect()
}

fn side(entry: &CatalogEntry, var: Var) -> Result<Side> {
    let emb = &entry.embedding;
    let ode = &entry.ode;
    let (deps, potential, suffix) = match var {
        Var::X => (Deps::X, "V1", "x"),
        Var::Y => (Deps::Y, "V2", "y"),
        Var::Z => return Err(Error::Invalid("potentials live in x and y".into())),
    };
    let mut subs = parse_map(if var == Var::X {
        &emb.x_subs
    } else {
        &emb.y_subs
    })?;
    if var == Var::Y {
        for p in &ode.params {
            if !subs.contains_key(p) && !SEED_PARAMS.contains(&p.as_str()) {
                subs.insert(p.clone(), DPoly::param(&format!("{p}_y")));
            }
        }
    }
    let apply = |p: &DPoly| {
        p.substitute(|s| match s {
            Symbol::Param(n) => subs.get(&**n).cloned(),
            _ => None,
        })
    };
    let omega = apply(&parse_expr(&emb.omega)?);
    let winv = omega
        .inverse_term()
        .ok_or_else(|| Error::NotInvertible(omega.to_string()))?;
    let scale = apply(&parse_expr(&emb.scale)?);
    let dep = format!("{}{suffix}", ode.dep);
    let eq = apply(&ode.eq).substitute(|s| match s {
        Symbol::Var(Var::Z) => Some(&omega * &DPoly::var(var)),
        Symbol::Jet(j) if *j.name == *ode.dep => {
            let k = j.orders[0];
            Some(&winv.pow(k as u32) * &DPoly::from_jet(Jet::new(&dep, deps, [k, 0])))
        }
        _ => None,
    });
    let scale = &scale * &winv.pow(emb.shift.max(0) as u32);
    let params = eq
        .params()
        .into_iter()
        .filter(|p| !SEED_PARAMS.contains(&p.as_str()))
        .collect();
    Ok(Side {
        var,
        deps,
        potential,
        dep,
        ode: eq,
        scale,
        shift: emb.shift,
        params,
    })
}

impl Side {
    /// Antiderivatives of the potential become negative-order jets of the
    /// catalog function, which the reduction leaves alone.
    fn embed(&self, p: &DPoly) -> DPoly {
        p.substitute(|s| match s {
            Symbol::Jet(j) if &*j.name == self.potential => {
                let k = j.orders[0] + self.shift;
                Some(&self.scale * &DPoly::from_jet(Jet::new(&self.dep, self.deps, [k, 0])))
            }
            _ => None,
        })
    }
}

fn is_nonzero_term(p: &DPoly, nonzero: &[String]) -> bool {
    p.as_term().is_some_and(|(m, _)| {
        m.factors().iter().all(|(s, _)| match s {
            Symbol::Hbar => true,
            Symbol::Param(n) => nonzero.iter().any(|z| **z == **n),
            _ => false,
        })
    })
}

/// Clear negative powers of invertible symbols and make monic.
fn tidy(p: &DPoly) -> DPoly {
    let mut lows: BTreeMap<Symbol, i32> = BTreeMap::new();
    for (m, _) in p.terms() {
        for s in p.symbols() {
            if matches!(s, Symbol::Param(_) | Symbol::Hbar) {
                let e = m.exponent(&s);
                let low = lows.entry(s).or_insert(e);
                *low = (*low).min(e);
            }
        }
    }
    let d = Monomial::from_factors(lows.into_iter().filter(|(_, e)| *e != 0));
    p.div_monomial(&d).unwrap_or_else(|| p.clone()).monic()
}

fn check(
    entry: &CatalogEntry,
    sides: &[Side; 2],
    level: usize,
    eqs: &[DPoly],
    constants: &[String],
) -> Result<LevelCheck> {
    let mut out = LevelCheck {
        level,
        status: LevelStatus::VanishesIdentically,
        mapping: Vec::new(),
        constraints: Vec::new(),
        multiplier_power: 0,
        detail: None,
        literal_residuals: Vec::new(),
        values: BTreeMap::new(),
    };
    if eqs.iter().all(DPoly::is_zero) {
        return Ok(out);
    }
    let mut coeffs = Vec::new();
    let mut antiderivative = false;
    for e in eqs {
        let mut g = e.clone();
        for s in sides {
            g = s.embed(&g);
        }
        antiderivative |= g.has_negative_jets();
        for s in sides {
            let (k, r) = pseudo_reduce(&g, &s.ode, &s.dep, s.deps)?;
            out.multiplier_power += k;
            g = r;
        }
        debug_assert!(!g.depends_on(Var::Z));
        coeffs.extend(constant_coefficients(&g));
    }
    let mut unknowns: Vec<String> = constants.to_vec();
    let catalog: Vec<String> = sides
        .iter()
        .rev()
        .flat_map(|s| s.params.iter().cloned())
        .collect();
    for p in &catalog {
        if !unknowns.contains(p) {
            unknowns.push(p.clone());
        }
    }
    let sol = solve_constants(&coeffs, &unknowns);
    let mut nonzero = entry.nonzero();
    nonzero.extend(
        ["cgamma", "sgamma"]
            .map(String::from)
            .into_iter()
            .filter(|_| entry.family == super::Family::I),
    );
    let mut relations: Vec<DPoly> = Vec::new();
    for u in &sol.order {
        let v = &sol.values[u];
        if catalog.contains(u) {
            out.constraints.push(format!("{u} = {v}"));
            relations.push(&DPoly::param(u) - v);
        } else {
            out.mapping.push((u.clone(), v.to_string()));
            out.values.insert(u.clone(), v.clone());
        }
    }
    let mut failed = Vec::new();
    for r in &sol.remaining {
        if is_nonzero_term(r, &nonzero) {
            failed.push(r.to_string());
        }
        out.constraints.push(format!("{} = 0", tidy(r)));
        relations.push(r.clone());
    }
    out.status = if !failed.is_empty() {
        out.detail = Some(format!("contradiction: {} = 0", failed.join(", ")));
        LevelStatus::Fails
    } else if out.constraints.is_empty() {
        LevelStatus::Vanishes
    } else {
        LevelStatus::VanishesUnderConstraints
    };
    if antiderivative && !matches!(out.status, LevelStatus::Vanishes) {
        // With the antiderivative treated as independent the check is only
        // sufficient.
        out.status = LevelStatus::Unsupported;
        out.detail = Some("antiderivatives of the catalog function remain in the condition".into());
    }
    if !entry.embedding.literal.is_empty() {
        let lit = parse_map(&entry.embedding.literal)?;
        for r in &relations {
            let v = r.substitute(|s| match s {
                Symbol::Param(n) => lit.get(&**n).cloned(),
                _ => None,
            });
            if !v.is_zero() {
                out.literal_residuals.push(format!("{} = 0", tidy(&v)));
            }
        }
    }
    Ok(out)
}

fn unsupported(level: usize, e: Error) -> LevelCheck {
    LevelCheck {
        level,
        status: LevelStatus::Unsupported,
        mapping: Vec::new(),
        constraints: Vec::new(),
        multiplier_power: 0,
        detail: Some(e.to_string()),
        literal_residuals: Vec::new(),
        values: BTreeMap::new(),
    }
}

/// Check the determining equations at levels `1..=max_level` (default: all)
/// on the entry's potential. Each level is checked together with the
/// conditions left over from the levels below it. Levels above one whose
/// condition does not vanish identically are reported as unsupported.
pub fn verify_potential(entry: &CatalogEntry, max_level: Option<usize>) -> Result<VerifyReport> {
    let seed = entry.seed();
    let top = seed.top_level();
    let max_level = max_level.unwrap_or(top).clamp(1, top);
    let sides = [side(entry, Var::X)?, side(entry, Var::Y)?];
    debug_assert!(sides[0].var == Var::X && sides[1].var == Var::Y);
    let mut levels: Vec<LevelCheck> = Vec::new();
    // Constants fixed at lower levels whose conditions they make vanish
    // identically, so the quadratures above them are exact.
    let mut carry: BTreeMap<String, DPoly> = BTreeMap::new();
    let mut blocked: Option<usize> = None;
    for level in 1..=max_level {
        if let Some(below) = blocked {
            let msg = format!(
                "integrating level {below} requires its condition to hold; quadrature modulo the catalog ODE is not supported"
            );
            levels.push(unsupported(level, Error::Invalid(msg)));
            continue;
        }
        let apply = |p: &DPoly, map: &BTreeMap<String, DPoly>| {
            p.substitute(|s| match s {
                Symbol::Param(n) => map.get(&**n).cloned(),
                _ => None,
            })
        };
        let run = || -> Result<(Vec<DPoly>, Vec<String>)> {
            if level == 1 {
                let sol = solve_chain(&level_chain(&seed, 1)?)?;
                return Ok((sol.conditions, sol.constants));
            }
            let r = nlcc(&seed, level)?;
            let mut eqs = vec![r.fixed.apply(&r.condition)];
            eqs.extend(r.lower_conditions.iter().cloned());
            let eqs = eqs.iter().map(|e| apply(e, &carry)).collect();
            let free = r
                .constants
                .iter()
                .filter(|c| !r.fixed.values.contains_key(*c) && !carry.contains_key(*c))
                .cloned()
                .collect();
            Ok((eqs, free))
        };
        let lc = match run() {
            Ok((eqs, free)) => match check(entry, &sides, level, &eqs, &free) {
                Ok(lc) => {
                    if lc.status != LevelStatus::VanishesIdentically {
                        if lc.status == LevelStatus::Vanishes
                            && eqs.iter().all(|e| apply(e, &lc.values).is_zero())
                        {
                            carry.extend(lc.values.clone());
                        } else {
                            blocked = Some(level);
                        }
                    }
                    lc
                }
                Err(e) => unsupported(level, e),
            },
            Err(e) => unsupported(level, e),
        };
        if lc.status == LevelStatus::Unsupported {
            blocked.get_or_insert(level);
        }
        levels.push(lc);
    }
    Ok(VerifyReport {
        id: entry.id.clone(),
        n: entry.n,
        max_level,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get;

    #[test]
    fn n5_family_two_through_level_two() {
        let r = verify_potential(get("N5-II").unwrap(), Some(2)).unwrap();
        for l in &r.levels {
            assert!(l.status.passes(), "{l:?}");
        }
    }

    #[test]
    fn p1_scaling_relation() {
        let r = verify_potential(get("N3-I").unwrap(), None).unwrap();
        let top = r.levels.last().unwrap();
        assert_eq!(top.status, LevelStatus::VanishesUnderConstraints, "{top:?}");
        assert_eq!(
            top.constraints,
            vec!["omega2^5*sgamma + cgamma*omega1^5 = 0".to_string()]
        );
        assert!(!top.literal_residuals.is_empty());
    }

    #[test]
    fn family_one_every_level() {
        for id in ["N5-I", "N7-I", "N9-I"] {
            let r = verify_potential(get(id).unwrap(), None).unwrap();
            assert_eq!(r.levels.len(), r.max_level);
            for l in &r.levels {
                assert!(
                    matches!(
                        l.status,
                        LevelStatus::Vanishes | LevelStatus::VanishesIdentically
                    ),
                    "{id}: {l:?}"
                );
            }
        }
    }

    #[test]
    fn family_two_above_level_two_is_unsupported() {
        let r = verify_potential(get("N6-II").unwrap(), None).unwrap();
        assert_eq!(
            r.levels[1].constraints,
            vec![
                "Lambda_y = Lambda".to_string(),
                "sigma_y = sigma".to_string()
            ]
        );
        assert_eq!(r.levels[2].status, LevelStatus::Unsupported);
        assert!(!r.passes());
    }
}
