//! Dominant balances, resonances and compatibility conditions.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::roots::rational_roots;
use super::OdeSpec;
use crate::symcore::{binom, DPoly, GaussRat, Monomial, Symbol};

const Z0: &str = "z0";
const A0: &str = "alpha";
const R: &str = "r";
const NEXT: &str = "next_";

fn sym(name: &str) -> Symbol {
    Symbol::param(name)
}

/// One monomial of the ODE split into its dependent-variable part
/// `Π (u^(k))^e` and a coefficient polynomial in the independent
/// variable and parameters.
#[derive(Clone, Debug)]
struct Piece {
    jets: Vec<(i32, i32)>,
    coeff: DPoly,
}

impl Piece {
    fn degree(&self) -> i32 {
        self.jets.iter().map(|(_, e)| e).sum()
    }

    fn weight(&self) -> i32 {
        self.jets.iter().map(|(k, e)| k * e).sum()
    }

    fn display(&self, dep: &str) -> String {
        let mut s = self.coeff.to_string();
        if s == "1" {
            s.clear();
        } else if self.coeff.len() > 1 {
            s = format!("({s})");
        }
        for (k, e) in &self.jets {
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(dep);
            s.push_str(&"'".repeat(*k as usize));
            if *e > 1 {
                s.push_str(&format!("^{e}"));
            }
        }
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    }
}

/// Group the equation by dependent-variable structure.
fn pieces(ode: &OdeSpec) -> Vec<Piece> {
    let mut by: BTreeMap<Vec<(i32, i32)>, DPoly> = BTreeMap::new();
    for (m, c) in ode.eq.terms() {
        let (dep_part, rest) = m.split(|s| matches!(s, Symbol::Jet(j) if *j.name == *ode.dep));
        let jets: Vec<(i32, i32)> = dep_part
            .factors()
            .iter()
            .map(|(s, e)| (s.as_jet().unwrap().orders[0], *e))
            .collect();
        by.entry(jets)
            .or_insert_with(DPoly::zero)
            .add_term(rest, c.clone());
    }
    by.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(jets, coeff)| Piece { jets, coeff })
        .collect()
}

fn to_gauss(q: &BigRational) -> GaussRat {
    GaussRat::real(q.clone())
}

fn ser_rat<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_poly<S: serde::Serializer>(p: &DPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// `q (q-1) ... (q-k+1)`.
fn falling(q: &DPoly, k: i32) -> DPoly {
    let mut out = DPoly::one();
    for i in 0..k {
        out = &out * &(q - &DPoly::int(i as i64));
    }
    out
}

/// Leading coefficient of `a0 χ^p`-substitution: the coefficient of the
/// monomial evaluated at `z = z0`.
fn at_z0(ode: &OdeSpec, c: &DPoly) -> DPoly {
    c.subs(&Symbol::Var(ode.var()), &DPoly::param(Z0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum A0Value {
    Exact {
        #[serde(serialize_with = "ser_poly")]
        value: DPoly,
    },
    /// A root of `relation` in the symbol `alpha`.
    Symbolic {
        #[serde(serialize_with = "ser_poly")]
        relation: DPoly,
    },
}

impl A0Value {
    pub fn exact(&self) -> Option<&DPoly> {
        match self {
            A0Value::Exact { value } => Some(value),
            A0Value::Symbolic { .. } => None,
        }
    }
}

/// A leading-order behaviour `u ~ a0 (z - z0)^p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Balance {
    #[serde(serialize_with = "ser_rat")]
    pub p: BigRational,
    pub a0: A0Value,
    pub dominant: Vec<String>,
    /// The leading equation in `alpha`, with the trivial root removed.
    #[serde(serialize_with = "ser_poly")]
    pub leading: DPoly,
    #[serde(skip)]
    dominant_idx: Vec<usize>,
}

impl Balance {
    pub fn p_integer(&self) -> Option<i64> {
        if self.p.is_integer() {
            self.p.to_integer().to_i64()
        } else {
            None
        }
    }
}

/// Exponent candidates from pairwise balancing of `(degree, weight)` classes.
fn exponent_candidates(ps: &[Piece]) -> Vec<(BigRational, Vec<usize>)> {
    let classes: BTreeSet<(i32, i32)> = ps.iter().map(|p| (p.degree(), p.weight())).collect();
    let cls: Vec<(i32, i32)> = classes.into_iter().collect();
    let mut cands: BTreeSet<BigRational> = BTreeSet::new();
    for (i, a) in cls.iter().enumerate() {
        for b in &cls[i + 1..] {
            if a.0 != b.0 {
                let p = BigRational::new(BigInt::from(a.1 - b.1), BigInt::from(a.0 - b.0));
                if p.is_negative() {
                    cands.insert(p);
                }
            }
        }
    }
    let exp = |c: &(i32, i32), p: &BigRational| {
        BigRational::from_integer(c.0.into()) * p - BigRational::from_integer(c.1.into())
    };
    let mut out = Vec::new();
    for p in cands.into_iter().rev() {
        let min = cls.iter().map(|c| exp(c, &p)).min().unwrap();
        let dom: Vec<(i32, i32)> = cls.iter().filter(|c| exp(c, &p) == min).cloned().collect();
        let degrees: BTreeSet<i32> = dom.iter().map(|c| c.0).collect();
        if degrees.len() < 2 {
            continue;
        }
        let idx = ps
            .iter()
            .enumerate()
            .filter(|(_, q)| dom.contains(&(q.degree(), q.weight())))
            .map(|(i, _)| i)
            .collect();
        out.push((p, idx));
    }
    out
}

/// `a = λ b` for a constant `λ`.
fn proportional(a: &DPoly, b: &DPoly) -> Option<GaussRat> {
    let (m, c) = b.terms().next()?;
    let lam = &a.coeff(m) * &c.inv()?;
    if *a == b.scale(&lam) {
        Some(lam)
    } else {
        None
    }
}

/// Collect a polynomial in the symbol `s` into coefficients, low to high.
fn coeffs_in(p: &DPoly, s: &Symbol) -> Vec<DPoly> {
    let lo = p.min_degree_in(s).min(0);
    debug_assert!(lo >= 0, "negative power of {s:?}");
    let hi = p.degree_in(s);
    (0..=hi.max(0)).map(|e| p.coeff_of(s, e)).collect()
}

/// Rewrite `p` modulo `rel(s) = 0`, whose leading coefficient must be an
/// invertible single term.
fn reduce_mod(p: &DPoly, s: &Symbol, rel: &DPoly) -> Option<DPoly> {
    let d = rel.degree_in(s);
    if d <= 0 {
        return Some(p.clone());
    }
    let inv = rel.coeff_of(s, d).inverse_term()?;
    let tail = -&(&(rel - &(&rel.coeff_of(s, d) * &DPoly::sym_pow(s.clone(), d))) * &inv);
    let mut cur = p.clone();
    while cur.degree_in(s) >= d {
        let e = cur.degree_in(s);
        let top = cur.coeff_of(s, e);
        let head = &top * &DPoly::sym_pow(s.clone(), e);
        cur = &(&cur - &head) + &(&(&top * &DPoly::sym_pow(s.clone(), e - d)) * &tail);
    }
    Some(cur)
}

/// Roots of `Σ c_i alpha^i` of the form `t·M` with `M` a monomial and `t`
/// rational; the rest (if any) is returned as a relation in `alpha`.
fn solve_leading(lead: &DPoly) -> (Vec<DPoly>, Option<DPoly>) {
    let a = sym(A0);
    let cs = coeffs_in(lead, &a);
    let nz: Vec<usize> = (0..cs.len()).filter(|&i| !cs[i].is_zero()).collect();
    if nz.len() < 2 {
        return (vec![], None);
    }
    let symbolic = || (vec![], Some(lead.clone()));
    let (lo, hi) = (nz[0], *nz.last().unwrap());
    let (Some((mlo, _)), Some((mhi, _))) = (cs[lo].as_term(), cs[hi].as_term()) else {
        return symbolic();
    };
    let ratio = mlo.mul(&mhi.pow(-1));
    let delta = (hi - lo) as i32;
    if ratio
        .factors()
        .iter()
        .any(|(s, e)| e % delta != 0 || !s.is_invertible())
    {
        return symbolic();
    }
    let scale = Monomial::from_factors(ratio.factors().iter().map(|(s, e)| (s.clone(), e / delta)));
    let m = DPoly::term(scale, GaussRat::int(1));
    let base = &cs[hi] * &m.powi(hi as i32).unwrap();
    let mut t = Vec::new();
    for (i, c) in cs.iter().enumerate() {
        if c.is_zero() {
            t.push(BigRational::zero());
            continue;
        }
        let v = &(c * &m.powi(i as i32).unwrap()) * &base.inverse_term().unwrap();
        match v.as_constant().and_then(|g| g.as_rational().cloned()) {
            Some(q) => t.push(q),
            None => return symbolic(),
        }
    }
    let rs = rational_roots(&t);
    let roots = rs
        .roots
        .iter()
        .filter(|(r, _)| !r.is_zero())
        .map(|(r, _)| m.scale(&to_gauss(r)))
        .collect();
    let rest = if rs.rest.len() > 1 {
        // Σ rest_i (alpha/M)^i, cleared of the negative powers of M.
        let d = rs.rest.len() as i32 - 1;
        let mut rel = DPoly::zero();
        for (i, q) in rs.rest.iter().enumerate() {
            rel += &(&DPoly::sym_pow(a.clone(), i as i32) * &m.powi(d - i as i32).unwrap())
                .scale(&to_gauss(q));
        }
        Some(rel)
    } else {
        None
    };
    (roots, rest)
}

/// All singular leading-order balances `u ~ a0 (z-z0)^p`, `p < 0`.
pub fn dominant_balances(ode: &OdeSpec) -> Vec<Balance> {
    let ps = pieces(ode);
    let mut out = Vec::new();
    for (p, idx) in exponent_candidates(&ps) {
        let pd = DPoly::constant(to_gauss(&p));
        let mut lead = DPoly::zero();
        let mut dmin = i32::MAX;
        for &i in &idx {
            dmin = dmin.min(ps[i].degree());
        }
        for &i in &idx {
            let pc = &ps[i];
            let mut t = at_z0(ode, &pc.coeff);
            for (k, e) in &pc.jets {
                t = &t * &falling(&pd, *k).pow(*e as u32);
            }
            lead += &t * &DPoly::sym_pow(sym(A0), pc.degree() - dmin);
        }
        if lead.is_zero() {
            continue;
        }
        let dominant: Vec<String> = idx.iter().map(|&i| ps[i].display(&ode.dep)).collect();
        let mk = |a0: A0Value| Balance {
            p: p.clone(),
            a0,
            dominant: dominant.clone(),
            leading: lead.clone(),
            dominant_idx: idx.clone(),
        };
        if !p.is_integer() {
            out.push(mk(A0Value::Symbolic {
                relation: lead.clone(),
            }));
            continue;
        }
        let (roots, rest) = solve_leading(&lead);
        for r in roots {
            out.push(mk(A0Value::Exact { value: r }));
        }
        if let Some(rel) = rest {
            out.push(mk(A0Value::Symbolic { relation: rel }));
        }
    }
    out
}

/// Roots of the resonance polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResonanceSet {
    #[serde(serialize_with = "ser_poly")]
    pub polynomial: DPoly,
    pub degree: usize,
    /// Rational roots with multiplicity, ascending.
    pub roots: Vec<String>,
    /// Integer roots with multiplicity, ascending.
    pub integers: Vec<i64>,
    /// Factor without rational roots, if the polynomial did not split.
    pub unresolved: Option<String>,
    /// Coefficients of the polynomial still involve parameters or `alpha`.
    pub parametric: bool,
}

impl ResonanceSet {
    pub fn all_integer(&self) -> bool {
        !self.parametric && self.unresolved.is_none() && self.integers.len() == self.roots.len()
    }

    pub fn distinct(&self) -> bool {
        let s: BTreeSet<i64> = self.integers.iter().cloned().collect();
        s.len() == self.integers.len()
    }

    /// Positive integer resonances, ascending, without repeats.
    pub fn positive(&self) -> Vec<i64> {
        let s: BTreeSet<i64> = self.integers.iter().cloned().filter(|r| *r > 0).collect();
        s.into_iter().collect()
    }
}

/// Linearisation of the dominant terms about `a0 χ^p`: the coefficient of
/// `s χ^{m0+r}`, as a polynomial in `r`.
fn resonance_polynomial(ode: &OdeSpec, b: &Balance) -> DPoly {
    let ps = pieces(ode);
    let pd = DPoly::constant(to_gauss(&b.p));
    let a0 = match &b.a0 {
        A0Value::Exact { value } => value.clone(),
        A0Value::Symbolic { .. } => DPoly::param(A0),
    };
    let pr = &pd + &DPoly::param(R);
    let mut q = DPoly::zero();
    for &i in &b.dominant_idx {
        let pc = &ps[i];
        let c = &at_z0(ode, &pc.coeff) * &a0.pow((pc.degree() - 1) as u32);
        for (j, (k, e)) in pc.jets.iter().enumerate() {
            let mut t = &falling(&pr, *k).scale(&GaussRat::int(*e as i64))
                * &falling(&pd, *k).pow((*e - 1) as u32);
            for (jj, (kk, ee)) in pc.jets.iter().enumerate() {
                if jj != j {
                    t = &t * &falling(&pd, *kk).pow(*ee as u32);
                }
            }
            q += &c * &t;
        }
    }
    if let A0Value::Symbolic { relation } = &b.a0 {
        if let Some(red) = reduce_mod(&q, &sym(A0), relation) {
            q = red;
        }
    }
    q
}

/// Resonances of a balance; `None` if the resonance polynomial vanishes.
pub fn resonances(ode: &OdeSpec, b: &Balance) -> Option<ResonanceSet> {
    let q = resonance_polynomial(ode, b);
    if q.is_zero() {
        return None;
    }
    let r = sym(R);
    let cs = coeffs_in(&q, &r);
    let degree = cs.len() - 1;
    let lead = &cs[degree];
    let mut rat = Vec::new();
    for c in &cs {
        match proportional(c, lead).and_then(|g| g.as_rational().cloned()) {
            Some(x) => rat.push(x),
            None => {
                return Some(ResonanceSet {
                    polynomial: q,
                    degree,
                    roots: vec![],
                    integers: vec![],
                    unresolved: None,
                    parametric: true,
                })
            }
        }
    }
    let rs = rational_roots(&rat);
    let flat = rs.flat();
    let integers = flat
        .iter()
        .filter(|x| x.is_integer())
        .filter_map(|x| x.to_integer().to_i64())
        .collect();
    let unresolved = (rs.rest.len() > 1).then(|| {
        let mut p = DPoly::zero();
        for (i, c) in rs.rest.iter().enumerate() {
            p += DPoly::sym_pow(r.clone(), i as i32).scale(&to_gauss(c));
        }
        p.to_string()
    });
    Some(ResonanceSet {
        polynomial: q,
        degree,
        roots: flat.iter().map(|x| x.to_string()).collect(),
        integers,
        unresolved,
        parametric: false,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompatStatus {
    SatisfiedGeneric,
    SatisfiedUnderConstraints,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Compat {
    pub r: i64,
    pub status: CompatStatus,
    /// Conditions that must vanish (empty when satisfied generically).
    pub constraints: Vec<String>,
}

/// Laurent expansion data from [`compatibility_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expansion {
    pub checks: Vec<Compat>,
    /// `a_0, a_1, ...`; free coefficients appear as `res{k}`.
    pub coefficients: Vec<String>,
    /// Symbols divided by while solving for the `a_k`.
    pub divisors: Vec<String>,
    #[serde(skip)]
    pub coeff_polys: Vec<DPoly>,
    /// Set when a non-resonant step could not be solved exactly.
    pub stuck: Option<String>,
}

/// Truncated Laurent series `Σ c[i] χ^(lo+i)`.
#[derive(Clone, Debug)]
struct Series {
    lo: i32,
    c: Vec<DPoly>,
}

impl Series {
    fn hi(&self) -> i32 {
        self.lo + self.c.len() as i32 - 1
    }

    fn deriv(&self) -> Series {
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(i, x)| x.scale(&GaussRat::int((self.lo + i as i32) as i64)))
            .collect();
        Series { lo: self.lo - 1, c }
    }

    fn mul(&self, o: &Series, top: i32) -> Series {
        let lo = self.lo + o.lo;
        let n = (top - lo + 1).max(0) as usize;
        let mut c = vec![DPoly::zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Series { lo, c }
    }

    fn at(&self, e: i32) -> DPoly {
        if e < self.lo || e > self.hi() {
            DPoly::zero()
        } else {
            self.c[(e - self.lo) as usize].clone()
        }
    }
}

/// Coefficient polynomial `c(z0 + χ)` as a series in `χ`.
fn coeff_series(ode: &OdeSpec, c: &DPoly) -> Series {
    let zs = Symbol::Var(ode.var());
    let deg = c.degree_in(&zs).max(0);
    let mut out = vec![DPoly::zero(); deg as usize + 1];
    for (m, k) in c.terms() {
        let e = m.exponent(&zs);
        let rest = DPoly::term(m.with_delta(&zs, -e), k.clone());
        for i in 0..=e {
            let z0p = DPoly::sym_pow(sym(Z0), e - i);
            out[i as usize] += (&rest * &z0p).scale(&GaussRat::int(binom(e as i64, i as i64)));
        }
    }
    Series { lo: 0, c: out }
}

/// Coefficient of `χ^target` in the ODE evaluated on the series `u`.
fn residual_at(ode: &OdeSpec, ps: &[Piece], cser: &[Series], u: &Series, target: i32) -> DPoly {
    let n = ode.order.max(0);
    let mut ders = vec![u.clone()];
    for k in 1..=n {
        ders.push(ders[k as usize - 1].deriv());
    }
    let mut total = DPoly::zero();
    for (pc, cs) in ps.iter().zip(cser) {
        let factors: Vec<&Series> = pc
            .jets
            .iter()
            .flat_map(|(k, e)| std::iter::repeat(&ders[*k as usize]).take(*e as usize))
            .collect();
        // Later factors can lower the exponent, so keep enough of each
        // partial product.
        let mut slack: i32 = factors.iter().map(|f| f.lo).sum();
        let mut acc = cs.clone();
        for f in factors {
            slack -= f.lo;
            acc = acc.mul(f, target - slack);
        }
        total += acc.at(target);
    }
    total
}

/// Leading exponent of the ODE evaluated on `a0 χ^p`.
fn leading_exponent(ps: &[Piece], b: &Balance, p: i32) -> i32 {
    b.dominant_idx
        .iter()
        .map(|&i| ps[i].degree() * p - ps[i].weight())
        .min()
        .unwrap()
}

fn nonzero_set(ode: &OdeSpec) -> BTreeSet<Symbol> {
    let mut s: BTreeSet<Symbol> = ode
        .nonzero
        .iter()
        .map(|n| if n == "hbar" { Symbol::Hbar } else { sym(n) })
        .collect();
    s.insert(Symbol::Hbar);
    s.insert(sym(Z0));
    s
}

/// Classify a compatibility residual.
fn judge(residual: &DPoly, nonzero: &BTreeSet<Symbol>) -> (CompatStatus, Vec<String>) {
    if residual.is_zero() {
        return (CompatStatus::SatisfiedGeneric, vec![]);
    }
    // Must vanish identically in z0 and in the free coefficients.
    let groups = residual
        .collect_by(|s| *s == sym(Z0) || matches!(s, Symbol::Param(p) if p.starts_with("res")));
    let mut conds = Vec::new();
    let mut failed = false;
    for (_, c) in groups {
        if c.is_zero() {
            continue;
        }
        if let Some((m, _)) = c.as_term() {
            if m.factors().iter().all(|(s, _)| nonzero.contains(s)) {
                failed = true;
            }
        }
        conds.push(c.to_string());
    }
    if failed {
        (CompatStatus::Failed, conds)
    } else {
        (CompatStatus::SatisfiedUnderConstraints, conds)
    }
}

/// Laurent expansion through `max(res)`, checking the conditions at each
/// positive resonance. `b` must have integer `p` and an exact `a0`.
pub fn compatibility_check(ode: &OdeSpec, b: &Balance, res: &[i64]) -> Expansion {
    let p = b.p_integer().expect("integer exponent");
    let a0 = b.a0.exact().expect("exact leading coefficient").clone();
    let ps = pieces(ode);
    let cser: Vec<Series> = ps.iter().map(|pc| coeff_series(ode, &pc.coeff)).collect();
    let m0 = leading_exponent(&ps, b, p as i32);
    let kmax = res.iter().cloned().filter(|r| *r > 0).max().unwrap_or(0);
    let resset: BTreeSet<i64> = res.iter().cloned().collect();
    let nonzero = nonzero_set(ode);
    let next = sym(NEXT);

    let mut coeffs = vec![a0];
    let mut checks = Vec::new();
    let mut divisors = BTreeSet::new();
    let mut stuck = None;
    for k in 1..=kmax {
        let mut c = coeffs.clone();
        c.push(DPoly::param(NEXT));
        let u = Series { lo: p as i32, c };
        let e = residual_at(ode, &ps, &cser, &u, m0 + k as i32);
        let alpha = e.coeff_of(&next, 1);
        let beta = e.coeff_of(&next, 0);
        if e.degree_in(&next) > 1 {
            stuck = Some(format!("a_{k} enters nonlinearly"));
            break;
        }
        if resset.contains(&k) {
            if !alpha.is_zero() {
                stuck = Some(format!("resonance {k} does not annihilate a_{k}"));
                break;
            }
            let (status, constraints) = judge(&beta, &nonzero);
            checks.push(Compat {
                r: k,
                status,
                constraints,
            });
            coeffs.push(DPoly::param(&format!("res{k}")));
        } else {
            let Some(inv) = alpha.inverse_term() else {
                stuck = Some(format!("cannot divide by `{alpha}` at a_{k}"));
                break;
            };
            for s in alpha.as_term().unwrap().0.factors() {
                if let Symbol::Param(n) = &s.0 {
                    divisors.insert(n.to_string());
                }
            }
            coeffs.push(-&(&beta * &inv));
        }
    }
    Expansion {
        checks,
        coefficients: coeffs.iter().map(|c| c.to_string()).collect(),
        divisors: divisors.into_iter().collect(),
        coeff_polys: coeffs,
        stuck,
    }
}

/// Re-substitute the truncated expansion and return the residual
/// coefficients of `χ^{m0}..χ^{m0+K}` (all zero at non-resonant orders).
pub fn expansion_residuals(ode: &OdeSpec, b: &Balance, exp: &Expansion) -> Vec<DPoly> {
    let p = b.p_integer().expect("integer exponent") as i32;
    let ps = pieces(ode);
    let cser: Vec<Series> = ps.iter().map(|pc| coeff_series(ode, &pc.coeff)).collect();
    let m0 = leading_exponent(&ps, b, p);
    let u = Series {
        lo: p,
        c: exp.coeff_polys.clone(),
    };
    (0..exp.coeff_polys.len() as i32)
        .map(|k| residual_at(ode, &ps, &cser, &u, m0 + k))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    PassWithConstraints,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::PassWithConstraints => "pass-with-constraints",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Fail => "fail",
        }
    }

    pub fn passes(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::PassWithConstraints)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchReport {
    pub balance: Balance,
    pub resonances: Option<ResonanceSet>,
    pub expansion: Option<Expansion>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PainleveReport {
    pub dep: String,
    pub order: i32,
    pub branches: Vec<BranchReport>,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

impl PainleveReport {
    /// Whether some passing branch has exactly these positive resonances.
    pub fn has_passing_resonances(&self, expected: &[i64]) -> bool {
        self.branches.iter().any(|b| {
            b.verdict.passes()
                && b.resonances
                    .as_ref()
                    .is_some_and(|r| r.positive() == expected)
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialises")
    }
}

fn analyse(ode: &OdeSpec, b: Balance) -> BranchReport {
    let mut notes = Vec::new();
    let done = |balance, resonances, expansion, verdict, notes| BranchReport {
        balance,
        resonances,
        expansion,
        verdict,
        notes,
    };
    if b.p_integer().is_none() {
        notes.push(format!("non-integer leading exponent p = {}", b.p));
        return done(b, None, None, Verdict::Inconclusive, notes);
    }
    let Some(rs) = resonances(ode, &b) else {
        notes.push("resonance polynomial vanishes identically (degenerate balance)".into());
        return done(b, None, None, Verdict::Inconclusive, notes);
    };
    if rs.parametric {
        notes.push("resonance polynomial depends on parameters or on a symbolic a0".into());
        return done(b, Some(rs), None, Verdict::Inconclusive, notes);
    }
    if !rs.all_integer() {
        notes.push("non-integer resonances".into());
        return done(b, Some(rs), None, Verdict::Fail, notes);
    }
    if !rs.distinct() {
        notes.push("repeated resonance".into());
        return done(b, Some(rs), None, Verdict::Fail, notes);
    }
    if !rs.integers.contains(&-1) {
        notes.push("-1 is not a resonance".into());
        return done(b, Some(rs), None, Verdict::Fail, notes);
    }
    if (rs.degree as i32) < ode.order {
        notes.push(format!(
            "non-principal balance: {} of {} constants",
            rs.degree, ode.order
        ));
    }
    if b.a0.exact().is_none() {
        notes.push("compatibility not checked for a symbolic a0".into());
        return done(b, Some(rs), None, Verdict::Inconclusive, notes);
    }
    let exp = compatibility_check(ode, &b, &rs.integers);
    if !exp.divisors.is_empty() {
        let undeclared: Vec<&String> = exp
            .divisors
            .iter()
            .filter(|d| d.as_str() != Z0 && !ode.nonzero.contains(d))
            .collect();
        if !undeclared.is_empty() {
            notes.push(format!(
                "assumed nonzero: {}",
                undeclared
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
    }
    let verdict = if let Some(s) = &exp.stuck {
        notes.push(s.clone());
        Verdict::Inconclusive
    } else if exp.checks.iter().any(|c| c.status == CompatStatus::Failed) {
        Verdict::Fail
    } else if exp
        .checks
        .iter()
        .any(|c| c.status == CompatStatus::SatisfiedUnderConstraints)
    {
        Verdict::PassWithConstraints
    } else {
        Verdict::Pass
    };
    done(b, Some(rs), Some(exp), verdict, notes)
}

/// Run the full test over every balance.
pub fn painleve_test(ode: &OdeSpec) -> PainleveReport {
    let mut diagnostics = Vec::new();
    let ps = pieces(ode);
    if ode.order == 0 {
        diagnostics.push(
            "no derivatives: the equation is an algebraic relation, whose solutions branch".into(),
        );
        let deg = ps.iter().map(|p| p.degree()).max().unwrap_or(0);
        let verdict = if deg >= 2 {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        return PainleveReport {
            dep: ode.dep.clone(),
            order: 0,
            branches: vec![],
            verdict,
            diagnostics,
        };
    }
    let branches: Vec<BranchReport> = dominant_balances(ode)
        .into_iter()
        .map(|b| analyse(ode, b))
        .collect();
    let verdict = if branches.is_empty() {
        if ps.iter().all(|p| p.degree() <= 1) {
            diagnostics.push("linear equation: no singular balance".into());
            Verdict::Pass
        } else {
            diagnostics.push(
                "no singular balance; possible logarithmic or essential singularities not tested"
                    .into(),
            );
            Verdict::Inconclusive
        }
    } else {
        branches.iter().map(|b| b.verdict).max().unwrap()
    };
    PainleveReport {
        dep: ode.dep.clone(),
        order: ode.order,
        branches,
        verdict,
        diagnostics,
    }
}
