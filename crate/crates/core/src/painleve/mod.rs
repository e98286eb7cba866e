//! Painlevé analysis of polynomial ODEs (Ablowitz–Ramani–Segur test).

mod ars;
mod roots;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symcore::{parse_var, parse_with, DPoly, Deps, Names, Symbol, Var};

pub use ars::{
    compatibility_check, dominant_balances, expansion_residuals, painleve_test, resonances,
    A0Value, Balance, BranchReport, Compat, CompatStatus, Expansion, PainleveReport, ResonanceSet,
    Verdict,
};
pub use roots::{rational_roots, RootSet};

/// A single polynomial ODE `eq = 0` for `dep(indep)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OdeSpec {
    pub indep: String,
    pub dep: String,
    pub order: i32,
    pub params: Vec<String>,
    /// Symbols assumed nonzero besides `hbar`, which always is unless set to 0.
    pub nonzero: Vec<String>,
    #[serde(serialize_with = "ser_display")]
    pub eq: DPoly,
}

fn ser_display<S: serde::Serializer>(p: &DPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl OdeSpec {
    /// Build from an expression, reading the order off the equation.
    pub fn new(dep: &str, indep: Var, eq: DPoly) -> Result<OdeSpec> {
        let deps = deps_of(indep)?;
        if eq.jets().iter().any(|j| &*j.name != dep || j.deps != deps) {
            return Err(Error::BadOde(format!(
                "equation involves functions other than {dep}({})",
                indep.name()
            )));
        }
        if eq
            .symbols()
            .iter()
            .any(|s| matches!(s, Symbol::Var(v) if *v != indep))
        {
            return Err(Error::BadOde(format!(
                "equation depends on a variable other than {}",
                indep.name()
            )));
        }
        if eq.has_negative_jets() {
            return Err(Error::BadOde("antiderivatives are not allowed".into()));
        }
        let order = eq
            .max_jet_order(dep)
            .ok_or_else(|| Error::BadOde(format!("{dep} does not occur")))?;
        let params = eq.params().into_iter().collect();
        Ok(OdeSpec {
            indep: indep.name().to_string(),
            dep: dep.to_string(),
            order,
            params,
            nonzero: Vec::new(),
            eq,
        })
    }

    pub fn var(&self) -> Var {
        parse_var(&self.indep).expect("validated on construction")
    }

    pub fn deps(&self) -> Deps {
        deps_of(self.var()).expect("validated on construction")
    }

    /// Specialise a parameter (or `hbar`) to a value. The order may drop,
    /// down to 0 for a purely algebraic relation.
    pub fn with_value(&self, name: &str, value: &DPoly) -> OdeSpec {
        let eq = if name == "hbar" {
            self.eq.subs(&Symbol::Hbar, value)
        } else {
            self.eq.subs_param(name, value)
        };
        let order = eq.max_jet_order(&self.dep).unwrap_or(0);
        let params = eq.params().into_iter().collect();
        let nonzero = self
            .nonzero
            .iter()
            .filter(|s| s.as_str() != name)
            .cloned()
            .collect();
        OdeSpec {
            order,
            params,
            nonzero,
            eq,
            ..self.clone()
        }
    }

    /// Parse the line-oriented format:
    ///
    /// ```text
    /// indep z
    /// dep F order 3
    /// param a sigma Lambda
    /// assume sigma != 0
    /// eq F''' - 6*F'^2 - z = 0
    /// ```
    ///
    /// Indented lines continue the previous `eq`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<OdeSpec> {
        let mut indep = None;
        let mut dep: Option<(String, i32)> = None;
        let mut params = Vec::new();
        let mut nonzero = Vec::new();
        let mut eq_text: Option<(usize, String)> = None;
        let bad = |line: usize, msg: &str| Error::BadOde(format!("line {line}: {msg}"));

        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            if line.starts_with(char::is_whitespace) {
                match eq_text.as_mut() {
                    Some((_, t)) => {
                        t.push(' ');
                        t.push_str(line.trim());
                        continue;
                    }
                    None => return Err(bad(ln, "continuation line without `eq`")),
                }
            }
            let mut words = line.split_whitespace();
            let key = words.next().unwrap();
            match key {
                "indep" => {
                    let v = words
                        .next()
                        .and_then(parse_var)
                        .ok_or_else(|| bad(ln, "expected x, y or z"))?;
                    indep = Some(v);
                }
                "dep" => {
                    let name = words
                        .next()
                        .ok_or_else(|| bad(ln, "missing function name"))?;
                    if words.next() != Some("order") {
                        return Err(bad(ln, "expected `dep NAME order N`"));
                    }
                    let n: i32 = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| bad(ln, "order must be an integer"))?;
                    if n < 1 {
                        return Err(bad(ln, "order must be at least 1"));
                    }
                    dep = Some((name.to_string(), n));
                }
                "param" => params.extend(words.map(str::to_string)),
                "assume" => {
                    let rest: Vec<&str> = words.collect();
                    match rest.as_slice() {
                        [s, "!=", "0"] => nonzero.push(s.to_string()),
                        _ => return Err(bad(ln, "only `assume NAME != 0` is supported")),
                    }
                }
                "eq" => {
                    if eq_text.is_some() {
                        return Err(bad(ln, "only one equation is allowed"));
                    }
                    eq_text = Some((ln, line.trim_start()[2..].trim().to_string()));
                }
                other => return Err(bad(ln, &format!("unknown directive `{other}`"))),
            }
        }

        let indep = indep.unwrap_or(Var::Z);
        let (dep, order) = dep.ok_or_else(|| Error::BadOde("missing `dep` line".into()))?;
        let (eq_line, eq_src) = eq_text.ok_or_else(|| Error::BadOde("missing `eq` line".into()))?;
        let mut names = Names::with_params(params.iter().cloned());
        names.funcs.insert(dep.clone(), deps_of(indep)?);
        let (lhs, rhs) = match eq_src.split_once('=') {
            Some((l, r)) => (l, r),
            None => (eq_src.as_str(), "0"),
        };
        let shift = |e: Error| match e {
            Error::Syntax { line, col, msg } => Error::Syntax {
                line: line + eq_line - 1,
                col,
                msg,
            },
            Error::UnknownIdent {
                name,
                line,
                col,
                suggestions,
            } => Error::UnknownIdent {
                name,
                line: line + eq_line - 1,
                col,
                suggestions,
            },
            e => e,
        };
        let eq =
            &parse_with(lhs, &names).map_err(shift)? - &parse_with(rhs, &names).map_err(shift)?;
        let mut spec = OdeSpec::new(&dep, indep, eq)?;
        if spec.order != order {
            return Err(Error::BadOde(format!(
                "declared order {order} but the equation has order {}",
                spec.order
            )));
        }
        let declared: BTreeSet<&String> = params.iter().collect();
        spec.params = spec
            .params
            .iter()
            .filter(|p| declared.contains(p))
            .cloned()
            .chain(
                spec.params
                    .iter()
                    .filter(|p| !declared.contains(p))
                    .cloned(),
            )
            .collect();
        spec.nonzero = nonzero;
        Ok(spec)
    }

    /// Inverse of [`OdeSpec::parse`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "indep {}", self.indep);
        let _ = writeln!(s, "dep {} order {}", self.dep, self.order);
        if !self.params.is_empty() {
            let _ = writeln!(s, "param {}", self.params.join(" "));
        }
        for n in &self.nonzero {
            let _ = writeln!(s, "assume {n} != 0");
        }
        let _ = writeln!(s, "eq {} = 0", self.eq);
        s
    }
}

fn deps_of(v: Var) -> Result<Deps> {
    match v {
        Var::X => Ok(Deps::X),
        Var::Y => Ok(Deps::Y),
        Var::Z => Ok(Deps::Z),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_p1() {
        let s = OdeSpec::parse("indep z\ndep F order 2\neq F'' = 6*F^2 + z\n").unwrap();
        assert_eq!(s.order, 2);
        assert_eq!(
            s.eq,
            &(&DPoly::jet("F", 2) - &DPoly::jet("F", 0).pow(2).scale(&6.into())) - &DPoly::z()
        );
    }

    #[test]
    fn continuation_and_params() {
        let txt = "dep U order 2\nparam mu\neq U'' - 6*U^2\n   - mu*z = 0\n";
        let s = OdeSpec::parse(txt).unwrap();
        assert_eq!(s.params, vec!["mu".to_string()]);
        assert_eq!(OdeSpec::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn order_mismatch() {
        let e = OdeSpec::parse("dep F order 3\neq F'' - F^2 = 0\n").unwrap_err();
        assert!(matches!(e, Error::BadOde(_)));
    }

    #[test]
    fn syntax_error_reports_file_line() {
        let e = OdeSpec::parse("indep z\ndep F order 1\n\neq F' - (F = 0\n").unwrap_err();
        match e {
            Error::Syntax { line, .. } => assert_eq!(line, 4),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn classical_limit_drops_order() {
        let s = OdeSpec::parse("dep F order 2\neq hbar^2*F'' - F^3 + z = 0\n").unwrap();
        assert_eq!(s.with_value("hbar", &DPoly::zero()).order, 0);
    }
}
