use super::chain::ChainSystem;
use crate::error::{Error, Result};
use crate::symcore::{factorial, integrate_by_parts, DPoly, GaussRat, Monomial, Symbol, Var};

/// Solution of a chain by quadrature.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSolution {
    /// `f_0..f_{n-1}`.
    pub f: Vec<DPoly>,
    /// Parts of the last equation no choice of integration functions can
    /// absorb; the chain holds iff these vanish.
    pub conditions: Vec<DPoly>,
    /// Integration constants introduced, as parameter names.
    pub constants: Vec<String>,
}

/// The part of an integrand that has no antiderivative in closed form.
pub(crate) struct Unabsorbable(pub DPoly);

impl Unabsorbable {
    pub(crate) fn into_error(self, level: usize) -> Error {
        let (m, c) = self.0.leading().expect("nonzero residual");
        Error::Quadrature {
            level,
            term: DPoly::term(m.clone(), c.clone()).to_string(),
        }
    }
}

fn integrate(p: &DPoly, v: Var) -> std::result::Result<DPoly, Unabsorbable> {
    let q = integrate_by_parts(p, v);
    if !q.residual.is_zero() {
        return Err(Unabsorbable(q.residual));
    }
    Ok(q.antiderivative)
}

fn is_y_side(s: &Symbol) -> bool {
    match s {
        Symbol::Var(v) => *v == Var::Y,
        Symbol::Jet(j) => j.deps.contains(Var::Y),
        _ => false,
    }
}

/// Solve the chain: particular solutions by `y`-quadrature down the chain,
/// then the integration functions `c_i(x)` from the last equation.
pub fn solve_chain(c: &ChainSystem) -> Result<ChainSolution> {
    try_solve_chain(c).map_err(|u| u.into_error(c.level))
}

pub(crate) fn try_solve_chain(c: &ChainSystem) -> std::result::Result<ChainSolution, Unabsorbable> {
    let n = c.len();
    let level = c.level;
    if n == 0 {
        let conditions = if c.g[0].is_zero() {
            vec![]
        } else {
            vec![c.g[0].clone()]
        };
        return Ok(ChainSolution {
            f: vec![],
            conditions,
            constants: vec![],
        });
    }
    let mut f: Vec<DPoly> = Vec::with_capacity(n);
    for j in 0..n {
        let mut rhs = c.g[j].clone();
        if j > 0 {
            rhs -= f[j - 1].differentiate(Var::X);
        }
        f.push(integrate(&rhs, Var::Y)?);
    }
    let r = &c.g[n] - &f[n - 1].differentiate(Var::X);

    // split R into sum_k y^k r_k(x) (k < n) and the unabsorbable rest
    let ys = Symbol::Var(Var::Y);
    let mut coeffs = vec![DPoly::zero(); n];
    let mut bad = DPoly::zero();
    for (m, cf) in r.terms() {
        let k = m.exponent(&ys);
        let (yside, _) = m.split(is_y_side);
        let pure_power =
            yside == Monomial::from_symbol(ys.clone(), k) || (k == 0 && yside.is_one());
        if pure_power && (k as usize) < n {
            coeffs[k as usize].add_term(m.with_delta(&ys, -k), cf.clone());
        } else {
            bad.add_term(m.clone(), cf.clone());
        }
    }

    // c_i^{(n-i)} = (-1)^{n-1-i} (n-1-i)! r_{n-1-i}
    let mut constants = Vec::new();
    let mut cfun = Vec::with_capacity(n);
    for i in 0..n {
        let k = n - 1 - i;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let mut ci = coeffs[k].scale(&GaussRat::int(sign * factorial(k as i64)));
        for _ in 0..(n - i) {
            ci = integrate(&ci, Var::X)?;
        }
        for t in 0..(n - i) {
            let name = format!("k{level}_{}", constants.len());
            ci += &DPoly::param(&name) * &DPoly::x().pow(t as u32);
            constants.push(name);
        }
        cfun.push(ci);
    }

    // f_j += sum_{i<=j} (-y)^{j-i}/(j-i)! c_i^{(j-i)}
    for (j, fj) in f.iter_mut().enumerate() {
        for (i, ci) in cfun.iter().enumerate().take(j + 1) {
            let d = j - i;
            let w = (-DPoly::y())
                .pow(d as u32)
                .scale(&GaussRat::frac(1, factorial(d as i64)));
            *fj += &w * &ci.diff_n(Var::X, d as u32);
        }
    }
    let conditions = if bad.is_zero() { vec![] } else { vec![bad] };
    Ok(ChainSolution {
        f,
        conditions,
        constants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compat::chain::level_chain;
    use crate::deteq::IntegralAnsatz;
    use crate::symcore::parse_expr;

    #[test]
    fn zero_chain() {
        let c = ChainSystem::new(vec![DPoly::zero(); 3], vec!["a".into(), "b".into()], 1).unwrap();
        let s = solve_chain(&c).unwrap();
        assert!(s.conditions.is_empty());
        // only integration constants remain
        assert!(s.f.iter().all(|f| f.jets().is_empty()));
    }

    #[test]
    fn family_one_n3_level_one() {
        let c = level_chain(&IntegralAnsatz::family_one(3), 1).unwrap();
        let s = solve_chain(&c).unwrap();
        assert!(s.conditions.is_empty());
        assert!(c.defects(&s.f).iter().all(DPoly::is_zero));
        let expect0 = parse_expr("3*sgamma*V2 + k1_0 + k1_1*x").unwrap();
        assert_eq!(s.f[0], expect0);
        let expect1 = parse_expr("3*cgamma*V1 - k1_1*y + k1_2").unwrap();
        assert_eq!(s.f[1], expect1);
    }

    #[test]
    fn family_two_n5_level_one() {
        let c = level_chain(&IntegralAnsatz::family_two(5), 1).unwrap();
        let s = solve_chain(&c).unwrap();
        assert!(s.conditions.is_empty(), "{:?}", s.conditions);
        assert!(c.defects(&s.f).iter().all(DPoly::is_zero));
        // only first antiderivatives, which the F' form of the potential absorbs
        assert!(s.f.iter().flat_map(|f| f.jets()).all(|j| j.orders[0] >= -1));
    }

    #[test]
    fn standard_chain_leaves_condition() {
        let ans = IntegralAnsatz::with_terms(3, &[(3, 0, 0), (0, 3, 0)]).unwrap();
        let c = level_chain(&ans, 1).unwrap();
        let s = solve_chain(&c).unwrap();
        assert!(!s.conditions.is_empty());
    }
}
