//! Differential operators `Σ g_{c,d} ∂x^c ∂y^d` in normal order.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::symcore::{binom, DPoly, GaussRat, Symbol, Var};

/// Derivative exponents `(c, d)` of `∂x^c ∂y^d`.
pub type DerivIdx = (u32, u32);

/// Normal-ordered operator: functions to the left of derivatives.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct OpPoly {
    words: BTreeMap<DerivIdx, DPoly>,
}

impl OpPoly {
    pub fn zero() -> Self {
        OpPoly {
            words: BTreeMap::new(),
        }
    }

    pub fn func(g: DPoly) -> Self {
        OpPoly::word(g, (0, 0))
    }

    pub fn word(g: DPoly, d: DerivIdx) -> Self {
        let mut words = BTreeMap::new();
        if !g.is_zero() {
            words.insert(d, g);
        }
        OpPoly { words }
    }

    pub fn identity() -> Self {
        OpPoly::func(DPoly::one())
    }

    /// `-iħ ∂`.
    fn momentum(d: DerivIdx) -> Self {
        OpPoly::word(&DPoly::i().scale(&GaussRat::int(-1)) * &DPoly::hbar(), d)
    }

    pub fn p1() -> Self {
        OpPoly::momentum((1, 0))
    }

    pub fn p2() -> Self {
        OpPoly::momentum((0, 1))
    }

    /// `p1^j p2^k = (-iħ)^(j+k) ∂x^j ∂y^k`.
    pub fn p_monomial(j: u32, k: u32) -> Self {
        let c = GaussRat::minus_i_pow((j + k) as i32);
        OpPoly::word(
            DPoly::sym_pow(Symbol::Hbar, (j + k) as i32).scale(&c),
            (j, k),
        )
    }

    pub fn x() -> Self {
        OpPoly::func(DPoly::x())
    }

    pub fn y() -> Self {
        OpPoly::func(DPoly::y())
    }

    /// `L_z = x p2 - y p1`.
    pub fn lz() -> Self {
        &OpPoly::x().mul(&OpPoly::p2()) - &OpPoly::y().mul(&OpPoly::p1())
    }

    /// `H = -ħ²/2 (∂x² + ∂y²) + V1(x) + V2(y)`.
    pub fn hamiltonian() -> Self {
        let k = DPoly::hbar().pow(2).scale(&GaussRat::frac(-1, 2));
        let mut h = &OpPoly::word(k.clone(), (2, 0)) + &OpPoly::word(k, (0, 2));
        h = &h + &OpPoly::func(&DPoly::jet("V1", 0) + &DPoly::jet("V2", 0));
        h
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &BTreeMap<DerivIdx, DPoly> {
        &self.words
    }

    pub fn coeff(&self, d: DerivIdx) -> DPoly {
        self.words.get(&d).cloned().unwrap_or_default()
    }

    pub fn order(&self) -> Option<u32> {
        self.words.keys().map(|(c, d)| c + d).max()
    }

    fn add_word(&mut self, d: DerivIdx, g: DPoly) {
        if g.is_zero() {
            return;
        }
        let e = self.words.entry(d).or_default();
        *e += g;
        if e.is_zero() {
            self.words.remove(&d);
        }
    }

    pub fn scale(&self, c: &DPoly) -> OpPoly {
        let mut out = OpPoly::zero();
        for (d, g) in &self.words {
            out.add_word(*d, g * c);
        }
        out
    }

    /// Product, renormalised by `∂^α h = Σ_γ C(α,γ) (∂^γ h) ∂^(α-γ)`.
    pub fn mul(&self, o: &OpPoly) -> OpPoly {
        let mut out = OpPoly::zero();
        for (&(a1, a2), g) in &self.words {
            for (&(b1, b2), h) in &o.words {
                for g1 in 0..=a1 {
                    let hx = h.diff_n(Var::X, g1);
                    if hx.is_zero() {
                        break;
                    }
                    for g2 in 0..=a2 {
                        let hxy = hx.diff_n(Var::Y, g2);
                        if hxy.is_zero() {
                            break;
                        }
                        let c = binom(a1 as i64, g1 as i64) * binom(a2 as i64, g2 as i64);
                        let coef = (g * &hxy).scale(&GaussRat::int(c));
                        out.add_word((a1 - g1 + b1, a2 - g2 + b2), coef);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> OpPoly {
        let mut acc = OpPoly::identity();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal adjoint: `(g ∂^α)† = (-1)^|α| ∂^α ∘ conj(g)`, renormalised.
    pub fn adjoint(&self) -> OpPoly {
        let mut out = OpPoly::zero();
        for (&(a1, a2), g) in &self.words {
            let sign = if (a1 + a2) % 2 == 0 { 1 } else { -1 };
            let d = OpPoly::word(DPoly::int(sign), (a1, a2));
            out = &out + &d.mul(&OpPoly::func(g.conj()));
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }

    /// Apply `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&DPoly) -> DPoly) -> OpPoly {
        let mut out = OpPoly::zero();
        for (d, g) in &self.words {
            out.add_word(*d, f(g));
        }
        out
    }
}

impl<'a> std::ops::Add<&'a OpPoly> for &'a OpPoly {
    type Output = OpPoly;
    fn add(self, o: &OpPoly) -> OpPoly {
        let mut out = self.clone();
        for (d, g) in &o.words {
            out.add_word(*d, g.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a OpPoly> for &'a OpPoly {
    type Output = OpPoly;
    fn sub(self, o: &OpPoly) -> OpPoly {
        let mut out = self.clone();
        for (d, g) in &o.words {
            out.add_word(*d, -g);
        }
        out
    }
}

impl fmt::Display for OpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return write!(f, "0");
        }
        for (k, ((c, d), g)) in self.words.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({g})")?;
            if *c > 0 {
                write!(f, " * dx^{c}")?;
            }
            if *d > 0 {
                write!(f, " * dy^{d}")?;
            }
        }
        Ok(())
    }
}

pub fn op_mul(a: &OpPoly, b: &OpPoly) -> OpPoly {
    a.mul(b)
}

pub fn commutator(a: &OpPoly, b: &OpPoly) -> OpPoly {
    &a.mul(b) - &b.mul(a)
}

/// `½{f, p1^j p2^k}`.
pub fn sym_anticommutator(f: &DPoly, mono: (u32, u32)) -> OpPoly {
    let p = OpPoly::p_monomial(mono.0, mono.1);
    let fo = OpPoly::func(f.clone());
    (&fo.mul(&p) + &p.mul(&fo)).scale(&DPoly::frac(1, 2))
}

/// `½ Σ A_{a,m,n} {L_z^a, p1^m p2^n}`.
pub fn build_wn(n: usize, a: &BTreeMap<(usize, usize, usize), DPoly>) -> Result<OpPoly> {
    if a.iter().all(|(_, v)| v.is_zero()) {
        return Err(Error::ZeroAnsatz(n));
    }
    let lz = OpPoly::lz();
    let mut lz_pows = vec![OpPoly::identity()];
    let mut out = OpPoly::zero();
    for (&(ea, m, k), coef) in a {
        if coef.is_zero() {
            continue;
        }
        if ea + m + k != n {
            return Err(Error::Invalid(format!(
                "A_{ea}_{m}_{k} does not have total order {n}"
            )));
        }
        while lz_pows.len() <= ea {
            let next = lz_pows.last().unwrap().mul(&lz);
            lz_pows.push(next);
        }
        let l = &lz_pows[ea];
        let p = OpPoly::p_monomial(m as u32, k as u32);
        let anti = &l.mul(&p) + &p.mul(l);
        out = &out + &anti.scale(&coef.scale(&GaussRat::frac(1, 2)));
    }
    Ok(out)
}

pub fn extract_coeffs(c: &OpPoly) -> BTreeMap<DerivIdx, DPoly> {
    c.words.clone()
}

/// Divide out the common power of ħ of the whole set, then set ħ = 0.
pub fn classical_limit(set: &[DPoly]) -> Vec<DPoly> {
    let h = Symbol::Hbar;
    let low = set
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.min_degree_in(&h))
        .min()
        .unwrap_or(0);
    set.iter()
        .map(|p| {
            p.filter(|m, _| m.exponent(&h) == low).mul_monomial(
                &crate::symcore::Monomial::from_symbol(h.clone(), -low),
                &GaussRat::int(1),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minus_i_hbar() -> DPoly {
        &DPoly::i().scale(&GaussRat::int(-1)) * &DPoly::hbar()
    }

    #[test]
    fn canonical_commutation() {
        let c = commutator(&OpPoly::p1(), &OpPoly::x());
        assert_eq!(c, OpPoly::func(minus_i_hbar()));
    }

    #[test]
    fn e2_relation() {
        let c = commutator(&OpPoly::lz(), &OpPoly::p1());
        let expect = OpPoly::p2().scale(&(&DPoly::i() * &DPoly::hbar()));
        assert_eq!(c, expect);
    }

    #[test]
    fn normal_ordering_step() {
        let v = OpPoly::func(DPoly::jet("V1", 0));
        let got = OpPoly::p1().mul(&v);
        let expect = &v.mul(&OpPoly::p1()) + &OpPoly::func(&minus_i_hbar() * &DPoly::jet("V1", 1));
        assert_eq!(got, expect);
    }

    #[test]
    fn x_integral_commutes() {
        let mut a = BTreeMap::new();
        a.insert((0, 2, 0), DPoly::frac(1, 2));
        a.insert((0, 0, 2), DPoly::frac(-1, 2));
        let w = build_wn(2, &a).unwrap();
        assert_eq!(
            w,
            (&OpPoly::p1().pow(2) - &OpPoly::p2().pow(2)).scale(&DPoly::frac(1, 2))
        );
        let x = &w + &sym_anticommutator(&(&DPoly::jet("V1", 0) - &DPoly::jet("V2", 0)), (0, 0));
        assert!(commutator(&OpPoly::hamiltonian(), &x).is_zero());
    }

    #[test]
    fn half_anticommutator_with_x() {
        let got = sym_anticommutator(&DPoly::x(), (1, 0));
        let expect = &OpPoly::x().mul(&OpPoly::p1())
            + &OpPoly::func(minus_i_hbar().scale(&GaussRat::frac(1, 2)));
        assert_eq!(got, expect);
    }

    #[test]
    fn wn_examples() {
        let mut a = BTreeMap::new();
        a.insert((0, 3, 0), DPoly::param("cgamma"));
        a.insert((0, 0, 3), DPoly::param("sgamma"));
        let w = build_wn(3, &a).unwrap();
        let expect = &OpPoly::p1().pow(3).scale(&DPoly::param("cgamma"))
            + &OpPoly::p2().pow(3).scale(&DPoly::param("sgamma"));
        assert_eq!(w, expect);
        assert!(matches!(
            build_wn(3, &BTreeMap::new()),
            Err(Error::ZeroAnsatz(3))
        ));
        let mut b = BTreeMap::new();
        b.insert((1, 2, 2), DPoly::one());
        assert!(build_wn(5, &b).unwrap().is_hermitian());
    }

    #[test]
    fn p1_obstruction_is_v1_prime() {
        let c = commutator(&OpPoly::hamiltonian(), &OpPoly::p1());
        let z = extract_coeffs(&c);
        assert_eq!(z.len(), 1);
        assert_eq!(
            z[&(0, 0)],
            (&DPoly::i() * &DPoly::hbar()) * DPoly::jet("V1", 1)
        );
    }

    #[test]
    fn classical_limit_grading() {
        let h2 = DPoly::hbar().pow(2);
        let p = &h2 * &(&DPoly::param("a") + &(&h2 * &DPoly::param("b")));
        assert_eq!(classical_limit(&[p]), vec![DPoly::param("a")]);
        assert_eq!(classical_limit(&[DPoly::zero()]), vec![DPoly::zero()]);
    }
}
