//! Determining equations `M_{j,2l} = 0` for an Nth-order integral.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::opalg::{build_wn, commutator, sym_anticommutator, OpPoly};
use crate::symcore::{a_name, binom, f_name, DPoly, Deps, GaussRat, Jet, Var};

pub type AMap = BTreeMap<(usize, usize, usize), DPoly>;

/// Order, leading coefficients and any resolved `f_{j,2l}` (l >= 1).
/// Unresolved coefficient functions are jets `f_j_2l(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralAnsatz {
    pub n: usize,
    pub a: AMap,
    pub f: BTreeMap<(usize, usize), DPoly>,
}

impl IntegralAnsatz {
    pub fn new(n: usize, a: AMap) -> Result<Self> {
        if n < 1 {
            return Err(Error::Invalid("order must be positive".into()));
        }
        for &(ea, m, k) in a.keys() {
            if ea + m + k != n {
                return Err(Error::Invalid(format!(
                    "A_{ea}_{m}_{k} does not have total order {n}"
                )));
            }
        }
        if a.values().all(DPoly::is_zero) {
            return Err(Error::ZeroAnsatz(n));
        }
        let a = a.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(IntegralAnsatz {
            n,
            a,
            f: BTreeMap::new(),
        })
    }

    /// Every `A_{a,m,n}` present as a free parameter.
    pub fn full(n: usize) -> Self {
        let mut a = AMap::new();
        for m in 0..=n {
            for k in 0..=n - m {
                a.insert((n - m - k, m, k), DPoly::param(&a_name(n - m - k, m, k)));
            }
        }
        IntegralAnsatz {
            n,
            a,
            f: BTreeMap::new(),
        }
    }

    /// Ansatz whose nonzero coefficients are the named parameters.
    pub fn with_terms(n: usize, terms: &[(usize, usize, usize)]) -> Result<Self> {
        let a = terms
            .iter()
            .map(|&(ea, m, k)| ((ea, m, k), DPoly::param(&a_name(ea, m, k))))
            .collect();
        IntegralAnsatz::new(n, a)
    }

    /// Family I leading part: `cγ p1^N + sγ p2^N`.
    pub fn family_one(n: usize) -> Self {
        let mut a = AMap::new();
        a.insert((0, n, 0), DPoly::param("cgamma"));
        a.insert((0, 0, n), DPoly::param("sgamma"));
        IntegralAnsatz {
            n,
            a,
            f: BTreeMap::new(),
        }
    }

    /// Family II leading part: `½{L_z^(N-4), p1² p2²}`.
    pub fn family_two(n: usize) -> Self {
        let mut a = AMap::new();
        a.insert((n - 4, 2, 2), DPoly::one());
        IntegralAnsatz {
            n,
            a,
            f: BTreeMap::new(),
        }
    }

    pub fn coeff(&self, ea: usize, m: usize, k: usize) -> DPoly {
        self.a.get(&(ea, m, k)).cloned().unwrap_or_default()
    }

    /// `f_{j,k}` with the vanishing conventions; `k = 0` from the closed form.
    pub fn f(&self, j: i64, k: i64) -> DPoly {
        let n = self.n as i64;
        if k < 0 || j < 0 || j > n - k {
            return DPoly::zero();
        }
        if k == 0 {
            return f_j0_single(self.n, &self.a, j as usize);
        }
        match self.f.get(&(j as usize, k as usize)) {
            Some(p) => p.clone(),
            None => DPoly::from_jet(Jet::new(&f_name(j as usize, k as usize), Deps::XY, [0, 0])),
        }
    }

    pub fn top_level(&self) -> usize {
        (self.n + 1) / 2
    }
}

fn f_j0_single(n: usize, a: &AMap, j: usize) -> DPoly {
    let mut out = DPoly::zero();
    let my = -DPoly::y();
    for k in 0..=n - j {
        for m in 0..=j {
            let Some(coef) = a.get(&(n - k - m, m, k)) else {
                continue;
            };
            let b = binom((n - k - m) as i64, (j - m) as i64);
            if b == 0 {
                continue;
            }
            let mono = &DPoly::x().pow((n - j - k) as u32) * &my.pow((j - m) as u32);
            out += (&mono * coef).scale(&GaussRat::int(b));
        }
    }
    out
}

/// Leading coefficient functions `f_{j,0}`, `j = 0..=N`.
pub fn f_j0(n: usize, a: &AMap) -> Vec<DPoly> {
    (0..=n).map(|j| f_j0_single(n, a, j)).collect()
}

fn minus_hbar2_pow(e: i64) -> DPoly {
    let h2 = DPoly::hbar().pow(2);
    let base = -h2;
    base.pow(e as u32)
}

/// `φ_{j,k}` for `k = 2l - ε > 0`; zero otherwise.
pub fn phi(j: i64, k: i64, ans: &IntegralAnsatz) -> DPoly {
    if k <= 0 {
        return DPoly::zero();
    }
    let n = ans.n as i64;
    let l = (k + 1) / 2;
    let eps = 2 * l - k;
    let mut out = DPoly::zero();
    for b in 1..=l {
        let w = minus_hbar2_pow(b - 1).scale(&GaussRat::frac(1, 2));
        for a in 0..=(2 * b - eps) {
            let c = binom(j + a, a) * binom(n - 2 * l + 2 * b - j - a, 2 * b - eps - a);
            if c == 0 {
                continue;
            }
            let f = ans.f(j + a, 2 * l - 2 * b);
            if f.is_zero() {
                continue;
            }
            let d = f.diff_xy(a as u32, (2 * b - eps - a) as u32);
            out += (&w * &d).scale(&GaussRat::int(c));
        }
    }
    out
}

/// The quantum correction `Q_{j,2l}`.
pub fn quantum_correction(j: i64, l: i64, ans: &IntegralAnsatz) -> DPoly {
    let n = ans.n as i64;
    let two = GaussRat::int(2);
    let mut q = phi(j - 1, 2 * l, ans).differentiate(Var::X).scale(&two);
    q += phi(j, 2 * l, ans).differentiate(Var::Y).scale(&two);
    let p_odd = phi(j, 2 * l - 1, ans);
    q += p_odd.diff_n(Var::X, 2);
    q += p_odd.diff_n(Var::Y, 2);
    for s in 0..=(l - 2) {
        let w = minus_hbar2_pow(s).scale(&GaussRat::int(-2));
        let o = 2 * s + 3;
        let t2 = (&DPoly::jet("V2", o as i32) * &ans.f(j, 2 * l - 2 * s - 4))
            .scale(&GaussRat::int(binom(n - 2 * l + 2 * s + 4 - j, o)));
        let t1 = (&DPoly::jet("V1", o as i32) * &ans.f(j + o, 2 * l - 2 * s - 4))
            .scale(&GaussRat::int(binom(j + o, o)));
        q += &w * &(&t2 + &t1);
    }
    for s in 1..=(2 * l - 1) {
        let w = minus_hbar2_pow((s - 1).div_euclid(2)).scale(&GaussRat::int(-2));
        let t2 = (&DPoly::jet("V2", s as i32) * &phi(j, 2 * l - s - 1, ans))
            .scale(&GaussRat::int(binom(n - 2 * l + s + 1 - j, s)));
        let t1 = (&DPoly::jet("V1", s as i32) * &phi(j + s, 2 * l - s - 1, ans))
            .scale(&GaussRat::int(binom(j + s, s)));
        q += &w * &(&t2 + &t1);
    }
    q
}

/// `M_{j,2l}`.
pub fn m_equation(j: i64, l: i64, ans: &IntegralAnsatz) -> DPoly {
    let n = ans.n as i64;
    let mut m = (&ans.f(j - 1, 2 * l).differentiate(Var::X)
        + &ans.f(j, 2 * l).differentiate(Var::Y))
        .scale(&GaussRat::int(2));
    let v1 = DPoly::jet("V1", 1);
    let v2 = DPoly::jet("V2", 1);
    m -= (&ans.f(j + 1, 2 * l - 2) * &v1).scale(&GaussRat::int(2 * (j + 1)));
    m -= (&ans.f(j, 2 * l - 2) * &v2).scale(&GaussRat::int(2 * (n - 2 * l + 2 - j)));
    m -= &DPoly::hbar().pow(2) * &quantum_correction(j, l, ans);
    m
}

/// Determining equations by level, `levels[l][j] = M_{j,2l}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DetSystem {
    pub n: usize,
    pub levels: Vec<Vec<DPoly>>,
}

#[derive(Serialize)]
struct LevelJson {
    l: usize,
    equations: Vec<String>,
}

#[derive(Serialize)]
struct DetSystemJson {
    #[serde(rename = "N")]
    n: usize,
    levels: Vec<LevelJson>,
}

impl DetSystem {
    pub fn equation_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_identically_zero(&self) -> bool {
        self.levels.iter().flatten().all(DPoly::is_zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = DetSystemJson {
            n: self.n,
            levels: self
                .levels
                .iter()
                .enumerate()
                .map(|(l, eqs)| LevelJson {
                    l,
                    equations: eqs.iter().map(|e| e.to_string()).collect(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("serialisable")
    }
}

/// Levels `0..=max_level` (capped at the top level).
pub fn determining_system_to(ans: &IntegralAnsatz, max_level: usize) -> DetSystem {
    let top = ans.top_level().min(max_level);
    let n = ans.n as i64;
    let levels = (0..=top as i64)
        .map(|l| {
            (0..=(n - 2 * l + 1))
                .map(|j| m_equation(j, l, ans))
                .collect()
        })
        .collect();
    DetSystem { n: ans.n, levels }
}

pub fn determining_system(ans: &IntegralAnsatz) -> DetSystem {
    determining_system_to(ans, usize::MAX)
}

/// `(equations, unknowns)` for order N.
pub fn counts(n: usize) -> (usize, usize) {
    if n % 2 == 1 {
        ((n + 3) * (n + 3) / 4, (n + 1) * (n + 3) / 4)
    } else {
        ((n + 2) * (n + 4) / 4, (n + 2) * (n + 2) / 4)
    }
}

/// The full operator `Y_N` built from the ansatz.
pub fn integral_operator(ans: &IntegralAnsatz) -> OpPoly {
    let n = ans.n as i64;
    let mut y = OpPoly::zero();
    for l in 0..=(n / 2) {
        for j in 0..=(n - 2 * l) {
            let f = ans.f(j, 2 * l);
            if f.is_zero() {
                continue;
            }
            y = &y + &sym_anticommutator(&f, (j as u32, (n - 2 * l - j) as u32));
        }
    }
    y
}

/// `Z_{j,N-2l-j+1} = c_l M_{j,2l}` with `c_l = -ħ²(-iħ)^(N-2l)/2`.
pub fn normalization(n: usize, l: usize) -> DPoly {
    let e = n as i32 - 2 * l as i32;
    DPoly::hbar()
        .pow((e + 2) as u32)
        .scale(&(&GaussRat::minus_i_pow(e) * &GaussRat::frac(-1, 2)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub j: usize,
    pub l: usize,
    pub formula: String,
    pub oracle: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub n: usize,
    pub max_level: usize,
    pub compared: usize,
    pub normalization: Vec<String>,
    pub mismatches: Vec<Mismatch>,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare the formula equations with the coefficients of `[H, Y_N]`.
pub fn cross_check(ans: &IntegralAnsatz, max_level: usize) -> CrossCheck {
    let top = ans.top_level().min(max_level);
    let y = integral_operator(ans);
    let z = commutator(&OpPoly::hamiltonian(), &y);
    let sys = determining_system_to(ans, top);
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for (l, eqs) in sys.levels.iter().enumerate() {
        let c = normalization(ans.n, l);
        for (j, m) in eqs.iter().enumerate() {
            let k = (ans.n as i64 - 2 * l as i64 - j as i64 + 1) as u32;
            let oracle = z.coeff((j as u32, k));
            let scaled = &c * m;
            compared += 1;
            if scaled != oracle {
                mismatches.push(Mismatch {
                    j,
                    l,
                    formula: scaled.to_string(),
                    oracle: oracle.to_string(),
                });
            }
        }
    }
    CrossCheck {
        n: ans.n,
        max_level: top,
        compared,
        normalization: (0..=top)
            .map(|l| normalization(ans.n, l).to_string())
            .collect(),
        mismatches,
    }
}

/// Sanity: `W_N` from the ansatz coefficients equals the leading part of `Y_N`.
pub fn leading_part_matches(ans: &IntegralAnsatz) -> Result<bool> {
    let w = build_wn(ans.n, &ans.a)?;
    let y = integral_operator(&IntegralAnsatz {
        f: BTreeMap::new(),
        ..ans.clone()
    });
    let n = ans.n as u32;
    let top = |o: &OpPoly| -> BTreeMap<(u32, u32), DPoly> {
        o.words()
            .iter()
            .filter(|((c, d), _)| c + d == n)
            .map(|(k, v)| (*k, v.clone()))
            .collect()
    };
    Ok(top(&w) == top(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_examples() {
        assert_eq!(counts(3), (9, 6));
        assert_eq!(counts(4), (12, 9));
        assert_eq!(counts(5), (16, 12));
        assert_eq!(counts(10), (42, 36));
    }

    #[test]
    fn f_j0_examples() {
        let mut a = AMap::new();
        a.insert((0, 2, 0), DPoly::frac(1, 2));
        a.insert((0, 0, 2), DPoly::frac(-1, 2));
        assert_eq!(
            f_j0(2, &a),
            vec![DPoly::frac(-1, 2), DPoly::zero(), DPoly::frac(1, 2)]
        );
        let mut b = AMap::new();
        b.insert((0, 3, 0), DPoly::one());
        assert_eq!(
            f_j0(3, &b),
            vec![DPoly::zero(), DPoly::zero(), DPoly::zero(), DPoly::one()]
        );
    }

    #[test]
    fn x_integral_system_vanishes() {
        let mut a = AMap::new();
        a.insert((0, 2, 0), DPoly::frac(1, 2));
        a.insert((0, 0, 2), DPoly::frac(-1, 2));
        let mut ans = IntegralAnsatz::new(2, a).unwrap();
        ans.f
            .insert((0, 2), &DPoly::jet("V1", 0) - &DPoly::jet("V2", 0));
        let sys = determining_system(&ans);
        assert_eq!(sys.equation_count(), counts(2).0);
        assert!(sys.is_identically_zero(), "{:?}", sys.levels);
    }

    #[test]
    fn level_zero_closure() {
        let ans = IntegralAnsatz::full(4);
        let sys = determining_system_to(&ans, 0);
        assert!(sys.levels[0].iter().all(DPoly::is_zero));
    }

    #[test]
    fn oracle_agrees_small() {
        for ans in [
            IntegralAnsatz::family_one(3),
            IntegralAnsatz::with_terms(4, &[(0, 2, 2)]).unwrap(),
        ] {
            let r = cross_check(&ans, usize::MAX);
            assert!(r.agrees(), "{:#?}", r.mismatches);
        }
    }
}
