use crate::deteq::{m_equation, IntegralAnsatz};
use crate::error::{Error, Result};
use crate::symcore::{f_name, DPoly, GaussRat, Var};

/// `∂y f_0 = G_0`, `∂x f_{j-1} + ∂y f_j = G_j` for `0 < j < n`,
/// `∂x f_{n-1} = G_n`. The boundary unknowns `f_{-1}` and `f_n` are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSystem {
    pub g: Vec<DPoly>,
    /// Names of the unknown functions `f_0..f_{n-1}`.
    pub unknowns: Vec<String>,
    pub level: usize,
}

impl ChainSystem {
    pub fn new(g: Vec<DPoly>, unknowns: Vec<String>, level: usize) -> Result<Self> {
        if g.is_empty() || unknowns.len() + 1 != g.len() {
            return Err(Error::MalformedChain(format!(
                "{} right-hand sides for {} unknowns",
                g.len(),
                unknowns.len()
            )));
        }
        Ok(ChainSystem { g, unknowns, level })
    }

    /// The chain's `n`: number of unknowns.
    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }

    /// Build the right-hand sides from known `f`'s (used for testing the
    /// elimination identity).
    pub fn from_solutions(f: &[DPoly]) -> Self {
        let n = f.len();
        let mut g = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut gj = DPoly::zero();
            if j > 0 {
                gj += f[j - 1].differentiate(Var::X);
            }
            if j < n {
                gj += f[j].differentiate(Var::Y);
            }
            g.push(gj);
        }
        let unknowns = (0..n).map(|j| format!("u{j}")).collect();
        ChainSystem {
            g,
            unknowns,
            level: 0,
        }
    }

    /// How far `f` is from solving the chain, equation by equation.
    pub fn defects(&self, f: &[DPoly]) -> Vec<DPoly> {
        let n = self.len();
        (0..=n)
            .map(|j| {
                let mut lhs = DPoly::zero();
                if j > 0 {
                    lhs += f[j - 1].differentiate(Var::X);
                }
                if j < n {
                    lhs += f[j].differentiate(Var::Y);
                }
                &lhs - &self.g[j]
            })
            .collect()
    }
}

/// `Σ_j (-1)^j ∂x^{n-j} ∂y^j G_j`, the integrability condition of the chain.
pub fn chain_eliminate(c: &ChainSystem) -> Result<DPoly> {
    for g in &c.g {
        if let Some(j) = g
            .jets()
            .into_iter()
            .find(|j| c.unknowns.iter().any(|u| **u == *j.name))
        {
            return Err(Error::MalformedChain(format!(
                "unknown {j} occurs on a right-hand side"
            )));
        }
    }
    let n = c.len() as u32;
    let mut out = DPoly::zero();
    for (j, g) in c.g.iter().enumerate() {
        let d = g.diff_xy(n - j as u32, j as u32);
        if j % 2 == 0 {
            out += d;
        } else {
            out -= d;
        }
    }
    Ok(out)
}

/// The level-`l` determining equations as a chain in `f_{0,2l}..f_{N-2l,2l}`.
/// Lower levels are taken from `ans` (resolved or left as jets).
pub fn level_chain(ans: &IntegralAnsatz, l: usize) -> Result<ChainSystem> {
    let n = ans.n as i64;
    let top = n - 2 * l as i64;
    if l == 0 || top < -1 {
        return Err(Error::Invalid(format!(
            "level {l} is outside 1..={}",
            ans.top_level()
        )));
    }
    let mut ans0 = ans.clone();
    for j in 0..=top.max(-1) {
        ans0.f.insert((j as usize, 2 * l), DPoly::zero());
    }
    let half = GaussRat::frac(-1, 2);
    let g = (0..=top + 1)
        .map(|j| m_equation(j, l as i64, &ans0).scale(&half))
        .collect();
    let unknowns = (0..=top).map(|j| f_name(j as usize, 2 * l)).collect();
    ChainSystem::new(g, unknowns, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_chain() {
        let c = ChainSystem::new(vec![DPoly::zero(); 3], vec!["a".into(), "b".into()], 1).unwrap();
        assert!(chain_eliminate(&c).unwrap().is_zero());
    }

    #[test]
    fn two_step_formula() {
        let g: Vec<DPoly> = ["V1^(2)*y", "x*V2'", "V1*V2"]
            .iter()
            .map(|s| crate::symcore::parse_expr(s).unwrap())
            .collect();
        let c = ChainSystem::new(g.clone(), vec!["a".into(), "b".into()], 2).unwrap();
        let expect = &(&g[0].diff_xy(2, 0) - &g[1].diff_xy(1, 1)) + &g[2].diff_xy(0, 2);
        assert_eq!(chain_eliminate(&c).unwrap(), expect);
    }

    #[test]
    fn identity_on_known_solutions() {
        let f: Vec<DPoly> = ["x^2*y*V1'", "V2^(2)*V1 + y^3", "x*y*V1*V2'"]
            .iter()
            .map(|s| crate::symcore::parse_expr(s).unwrap())
            .collect();
        let c = ChainSystem::from_solutions(&f);
        assert!(chain_eliminate(&c).unwrap().is_zero());
        assert!(c.defects(&f).iter().all(DPoly::is_zero));
    }

    #[test]
    fn leftover_unknown_rejected() {
        let ans = IntegralAnsatz::family_one(5);
        // level 2 still mentions the unresolved level-1 functions
        let c = level_chain(&ans, 2).unwrap();
        let mut bad = c.clone();
        bad.unknowns = vec!["f_0_2".into(), "f_1_2".into()];
        bad.g.truncate(3);
        assert!(matches!(
            chain_eliminate(&bad),
            Err(Error::MalformedChain(_))
        ));
    }

    #[test]
    fn level_chain_shape() {
        let ans = IntegralAnsatz::family_one(3);
        let c1 = level_chain(&ans, 1).unwrap();
        assert_eq!(c1.len(), 2);
        let c2 = level_chain(&ans, 2).unwrap();
        assert_eq!(c2.len(), 0);
        assert_eq!(c2.g.len(), 1);
    }
}
