//! Structural templates for the ODEs of the two families.
//!
//! Matching is on term skeletons only: which derivatives occur, with what
//! powers, and the power of `z`. Constant coefficients are ignored.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::painleve::OdeSpec;
use crate::symcore::{DPoly, Deps, GaussRat, Jet, Monomial, Symbol, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TemplateFamily {
    I,
    II,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TemplateSpec {
    pub family: TemplateFamily,
    #[serde(rename = "N")]
    pub n: usize,
}

impl TemplateSpec {
    pub fn new(family: TemplateFamily, n: usize) -> Result<TemplateSpec> {
        match family {
            TemplateFamily::I if n < 3 || n % 2 == 0 => Err(Error::Invalid(format!(
                "family I templates exist for odd N >= 3, not {n}"
            ))),
            TemplateFamily::II if n < 4 => Err(Error::Invalid(format!(
                "family II templates need N >= 4, not {n}"
            ))),
            _ => Ok(TemplateSpec { family, n }),
        }
    }

    pub fn order(&self) -> i32 {
        match self.family {
            TemplateFamily::I => self.n as i32 - 1,
            TemplateFamily::II => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TemplateMatch {
    pub matched: bool,
    /// Skeletons of terms the template does not allow.
    pub unmatched: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Power of `z` the equation was multiplied by before matching.
    pub z_factor: i32,
}

struct Skeleton {
    z: i32,
    /// `(order, power)` of each derivative factor, order >= 1.
    ders: Vec<(i32, i32)>,
    /// Power of the undifferentiated function.
    m: i32,
}

impl Skeleton {
    fn of(m: &Monomial, dep: &str) -> Option<Skeleton> {
        let mut sk = Skeleton {
            z: 0,
            ders: Vec::new(),
            m: 0,
        };
        for (s, e) in m.factors() {
            match s {
                Symbol::Var(Var::Z) => sk.z = *e,
                Symbol::Jet(j) if &*j.name == dep && j.orders[0] == 0 => sk.m = *e,
                Symbol::Jet(j) if &*j.name == dep && j.orders[0] > 0 => {
                    sk.ders.push((j.orders[0], *e))
                }
                _ => return None,
            }
        }
        Some(sk)
    }

    fn weight(&self) -> i32 {
        self.ders.iter().map(|(o, e)| o * e).sum()
    }

    fn is(&self, ders: &[(i32, i32)], m: i32) -> bool {
        self.ders == ders && self.m == m
    }
}

fn allowed_two(sk: &Skeleton, n: i32) -> bool {
    let z = sk.z;
    if sk.is(&[(3, 1)], 0) {
        z == n - 4
    } else if sk.is(&[(2, 1)], 0) {
        z == n - 5
    } else if sk.is(&[(1, 1)], 0) || sk.is(&[], 1) {
        z <= n - 1
    } else if sk.is(&[(1, 2)], 0) {
        z == n - 4
    } else if sk.is(&[(1, 1)], 1) {
        z == n - 5
    } else if sk.is(&[], 2) {
        z == n - 6
    } else if sk.is(&[], 0) {
        z <= n
    } else {
        false
    }
}

fn allowed_one(sk: &Skeleton, n: i32) -> bool {
    if sk.z != 0 {
        return sk.z == 1 && sk.ders.is_empty() && sk.m == 0;
    }
    let w = sk.weight();
    if w == n - 1 {
        return sk.is(&[(n - 1, 1)], 0);
    }
    if w == 0 {
        return sk.m <= (n + 1) / 2;
    }
    if w % 2 != 0 || w > n - 3 {
        return false;
    }
    let k = (n - 1 - w) / 2;
    if sk.ders == [(w, 1)] {
        sk.m <= k
    } else {
        sk.ders.len() <= 2 && sk.m < k
    }
}

/// Does `ode` have the shape of the family's template at order `N`?
pub fn template_match(ode: &OdeSpec, spec: TemplateSpec) -> TemplateMatch {
    let n = spec.n as i32;
    if ode.indep != "z" {
        return TemplateMatch {
            matched: false,
            unmatched: Vec::new(),
            reason: Some("independent variable must be z".into()),
            z_factor: 0,
        };
    }
    if ode.order != spec.order() {
        return TemplateMatch {
            matched: false,
            unmatched: Vec::new(),
            reason: Some(format!(
                "order {} where the template has order {}",
                ode.order,
                spec.order()
            )),
            z_factor: 0,
        };
    }
    // An equation may be printed divided by a power of z.
    let top = Symbol::Jet(Jet::new(&ode.dep, Deps::Z, [ode.order, 0]));
    let z_factor = match spec.family {
        TemplateFamily::II => {
            (n - 4 - ode.eq.coeff_of(&top, 1).degree_in(&Symbol::Var(Var::Z))).max(0)
        }
        TemplateFamily::I => 0,
    };
    let eq = &ode.eq * &DPoly::z().pow(z_factor as u32);
    let terms = eq.collect_by(|s| matches!(s, Symbol::Var(_) | Symbol::Jet(_)));
    let mut unmatched = Vec::new();
    let mut leading = false;
    for m in terms.keys() {
        let ok = match Skeleton::of(m, &ode.dep) {
            Some(sk) => {
                let lead = match spec.family {
                    TemplateFamily::I => sk.is(&[(n - 1, 1)], 0),
                    TemplateFamily::II => sk.is(&[(3, 1)], 0) && sk.z == n - 4,
                };
                leading |= lead;
                sk.z >= 0
                    && match spec.family {
                        TemplateFamily::I => allowed_one(&sk, n),
                        TemplateFamily::II => allowed_two(&sk, n),
                    }
            }
            None => false,
        };
        if !ok {
            unmatched.push(DPoly::term(m.clone(), GaussRat::int(1)).to_string());
        }
    }
    let reason = (!leading).then(|| "the leading term of the template is missing".to_string());
    TemplateMatch {
        matched: leading && unmatched.is_empty(),
        unmatched,
        reason,
        z_factor,
    }
}
