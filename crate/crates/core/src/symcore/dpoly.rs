//! Sparse differential polynomials over the Gaussian rationals.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::gauss::GaussRat;
use super::monomial::Monomial;
use super::symbol::{Jet, Symbol, Var};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct DPoly {
    terms: BTreeMap<Monomial, GaussRat>,
}

impl DPoly {
    pub fn zero() -> Self {
        DPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        DPoly::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        DPoly::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        DPoly::constant(GaussRat::int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        DPoly::constant(GaussRat::frac(n, d))
    }

    pub fn i() -> Self {
        DPoly::constant(GaussRat::i())
    }

    pub fn term(m: Monomial, c: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DPoly { terms }
    }

    pub fn sym(s: Symbol) -> Self {
        DPoly::term(Monomial::from_symbol(s, 1), GaussRat::one())
    }

    pub fn sym_pow(s: Symbol, e: i32) -> Self {
        DPoly::term(Monomial::from_symbol(s, e), GaussRat::one())
    }

    pub fn var(v: Var) -> Self {
        DPoly::sym(Symbol::Var(v))
    }

    pub fn x() -> Self {
        DPoly::var(Var::X)
    }

    pub fn y() -> Self {
        DPoly::var(Var::Y)
    }

    pub fn z() -> Self {
        DPoly::var(Var::Z)
    }

    pub fn hbar() -> Self {
        DPoly::sym(Symbol::Hbar)
    }

    pub fn param(name: &str) -> Self {
        DPoly::sym(Symbol::param(name))
    }

    pub fn jet(name: &str, order: i32) -> Self {
        DPoly::sym(Symbol::jet(name, order))
    }

    pub fn from_jet(j: Jet) -> Self {
        DPoly::sym(Symbol::Jet(j))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, GaussRat> {
        self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> GaussRat {
        self.terms.get(m).cloned().unwrap_or_else(GaussRat::zero)
    }

    /// The constant term, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// Single term `c*m`, if the polynomial has exactly one term.
    pub fn as_term(&self) -> Option<(&Monomial, &GaussRat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn add_term_ref(&mut self, m: &Monomial, c: &GaussRat) {
        if let Some(v) = self.terms.get_mut(m) {
            *v += c;
            if v.is_zero() {
                self.terms.remove(m);
            }
        } else if !c.is_zero() {
            self.terms.insert(m.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &GaussRat) -> DPoly {
        if c.is_zero() {
            return DPoly::zero();
        }
        DPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &GaussRat) -> DPoly {
        if c.is_zero() {
            return DPoly::zero();
        }
        let mut out = DPoly::zero();
        for (n, a) in &self.terms {
            out.add_term(n.mul(m), a * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> DPoly {
        let mut acc = DPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a single term made of invertible symbols.
    pub fn inverse_term(&self) -> Option<DPoly> {
        let (m, c) = self.as_term()?;
        if !m.factors().iter().all(|(s, _)| s.is_invertible()) {
            return None;
        }
        Some(DPoly::term(m.pow(-1), c.inv()?))
    }

    /// Integer power allowing negative exponents for invertible single terms.
    pub fn powi(&self, e: i32) -> Option<DPoly> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            Some(self.inverse_term()?.pow((-e) as u32))
        }
    }

    pub fn conj(&self) -> DPoly {
        DPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.conj()))
                .collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    pub fn is_imag(&self) -> bool {
        self.terms.values().all(|c| c.is_imag())
    }

    pub fn map_coeffs<F: Fn(&GaussRat) -> GaussRat>(&self, f: F) -> DPoly {
        let mut out = DPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Keep only the terms satisfying `pred`.
    pub fn filter<F: Fn(&Monomial, &GaussRat) -> bool>(&self, pred: F) -> DPoly {
        DPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| pred(m, c))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(s, _)| s.clone()))
            .collect()
    }

    pub fn jets(&self) -> BTreeSet<Jet> {
        self.symbols()
            .into_iter()
            .filter_map(|s| match s {
                Symbol::Jet(j) => Some(j),
                _ => None,
            })
            .collect()
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.symbols()
            .into_iter()
            .filter_map(|s| match s {
                Symbol::Param(p) => Some(p.to_string()),
                _ => None,
            })
            .collect()
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        self.terms.keys().any(|m| m.exponent(s) != 0)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.depends_on(v))
    }

    /// Any jet of a function with the given name.
    pub fn has_jet_named(&self, name: &str) -> bool {
        self.jets().iter().any(|j| &*j.name == name)
    }

    /// Highest order of jets with `name`, if any.
    pub fn max_jet_order(&self, name: &str) -> Option<i32> {
        self.jets()
            .iter()
            .filter(|j| &*j.name == name)
            .map(|j| j.order())
            .max()
    }

    pub fn has_negative_jets(&self) -> bool {
        self.jets().iter().any(|j| j.orders.iter().any(|&o| o < 0))
    }

    pub fn degree_in(&self, s: &Symbol) -> i32 {
        self.terms.keys().map(|m| m.exponent(s)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, s: &Symbol) -> i32 {
        self.terms.keys().map(|m| m.exponent(s)).min().unwrap_or(0)
    }

    /// Partial derivative with respect to a base variable.
    pub fn differentiate(&self, v: Var) -> DPoly {
        let mut out = DPoly::zero();
        for (m, c) in &self.terms {
            for (s, e) in m.factors() {
                let ds = match s {
                    Symbol::Var(w) if *w == v => None,
                    Symbol::Jet(j) => match j.lifted(v, 1) {
                        Some(k) => Some(Symbol::Jet(k)),
                        None => continue,
                    },
                    _ => continue,
                };
                let mut nm = m.with_delta(s, -1);
                if let Some(d) = ds {
                    nm = nm.mul(&Monomial::from_symbol(d, 1));
                }
                out.add_term(nm, c * &GaussRat::int(*e as i64));
            }
        }
        out
    }

    pub fn diff_n(&self, v: Var, n: u32) -> DPoly {
        let mut p = self.clone();
        for _ in 0..n {
            if p.is_zero() {
                break;
            }
            p = p.differentiate(v);
        }
        p
    }

    /// `∂x^a ∂y^b`.
    pub fn diff_xy(&self, a: u32, b: u32) -> DPoly {
        self.diff_n(Var::X, a).diff_n(Var::Y, b)
    }

    /// Replace symbols by polynomials. `f` returns `None` to keep a symbol.
    /// Negative exponents require an invertible single-term image.
    pub fn substitute<F>(&self, f: F) -> DPoly
    where
        F: Fn(&Symbol) -> Option<DPoly>,
    {
        let mut images: HashMap<Symbol, Option<DPoly>> = HashMap::new();
        let mut powers: HashMap<(Symbol, i32), DPoly> = HashMap::new();
        let mut out = DPoly::zero();
        for (m, c) in &self.terms {
            let mut kept: Vec<(Symbol, i32)> = Vec::new();
            let mut acc = DPoly::constant(c.clone());
            for (s, e) in m.factors() {
                let img = images.entry(s.clone()).or_insert_with(|| f(s)).clone();
                match img {
                    None => kept.push((s.clone(), *e)),
                    Some(p) => {
                        let key = (s.clone(), *e);
                        let pw = match powers.get(&key) {
                            Some(pw) => pw.clone(),
                            None => {
                                let pw = p.powi(*e).unwrap_or_else(|| {
                                    panic!("cannot invert image of {s} (= {p})")
                                });
                                powers.insert(key, pw.clone());
                                pw
                            }
                        };
                        acc = &acc * &pw;
                    }
                }
                if acc.is_zero() {
                    break;
                }
            }
            if acc.is_zero() {
                continue;
            }
            let km = Monomial::from_factors(kept);
            for (n, a) in acc.terms {
                out.add_term(n.mul(&km), a);
            }
        }
        out
    }

    pub fn subs(&self, s: &Symbol, value: &DPoly) -> DPoly {
        self.substitute(|t| if t == s { Some(value.clone()) } else { None })
    }

    pub fn subs_param(&self, name: &str, value: &DPoly) -> DPoly {
        self.subs(&Symbol::param(name), value)
    }

    /// Group by monomials in `targets`: p = Σ key · value, values free of targets.
    pub fn collect(&self, targets: &[Symbol]) -> BTreeMap<Monomial, DPoly> {
        let mut out: BTreeMap<Monomial, DPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (k, rest) = m.split(|s| targets.contains(s));
            out.entry(k).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Group by the part of each monomial selected by `pred`.
    pub fn collect_by<F: Fn(&Symbol) -> bool>(&self, pred: F) -> BTreeMap<Monomial, DPoly> {
        let mut out: BTreeMap<Monomial, DPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (k, rest) = m.split(&pred);
            out.entry(k).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Coefficient of `s^e` (exact power), as a polynomial free of `s`.
    pub fn coeff_of(&self, s: &Symbol, e: i32) -> DPoly {
        let mut out = DPoly::zero();
        for (m, c) in &self.terms {
            if m.exponent(s) == e {
                out.add_term(m.with_delta(s, -e), c.clone());
            }
        }
        out
    }

    /// Divide every term by `d`; `None` unless exact.
    pub fn div_monomial(&self, d: &Monomial) -> Option<DPoly> {
        let mut out = DPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.checked_div(d)?, c.clone());
        }
        Some(out)
    }

    /// Largest monomial (in symbol order) and its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &GaussRat)> {
        self.terms.iter().next_back()
    }

    /// Make the leading coefficient 1 (by dividing by a Gaussian rational).
    pub fn monic(&self) -> DPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().unwrap()),
            None => DPoly::zero(),
        }
    }

    /// Rendering with unicode symbols.
    pub fn pretty(&self) -> String {
        prettify(&self.to_string())
    }
}

/// Map ascii names to their mathematical glyphs.
pub fn prettify(s: &str) -> String {
    let mut out = s.replace("hbar", "ħ");
    for (a, b) in [
        ("sigma", "σ"),
        ("Lambda", "Λ"),
        ("lambda", "λ"),
        ("cgamma", "cosγ"),
        ("sgamma", "sinγ"),
        ("omega", "ω"),
    ] {
        out = out.replace(a, b);
    }
    out
}

impl From<GaussRat> for DPoly {
    fn from(c: GaussRat) -> Self {
        DPoly::constant(c)
    }
}

impl From<Symbol> for DPoly {
    fn from(s: Symbol) -> Self {
        DPoly::sym(s)
    }
}

impl<'a> Add<&'a DPoly> for &'a DPoly {
    type Output = DPoly;
    fn add(self, o: &DPoly) -> DPoly {
        let (big, small) = if self.len() >= o.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term_ref(m, c);
        }
        out
    }
}

impl Add for DPoly {
    type Output = DPoly;
    fn add(mut self, o: DPoly) -> DPoly {
        self += &o;
        self
    }
}

impl AddAssign<&DPoly> for DPoly {
    fn add_assign(&mut self, o: &DPoly) {
        for (m, c) in &o.terms {
            self.add_term_ref(m, c);
        }
    }
}

impl AddAssign for DPoly {
    fn add_assign(&mut self, o: DPoly) {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
    }
}

impl<'a> Sub<&'a DPoly> for &'a DPoly {
    type Output = DPoly;
    fn sub(self, o: &DPoly) -> DPoly {
        let mut out = self.clone();
        out -= o;
        out
    }
}

impl Sub for DPoly {
    type Output = DPoly;
    fn sub(mut self, o: DPoly) -> DPoly {
        self -= &o;
        self
    }
}

impl SubAssign<&DPoly> for DPoly {
    fn sub_assign(&mut self, o: &DPoly) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl SubAssign for DPoly {
    fn sub_assign(&mut self, o: DPoly) {
        *self -= &o;
    }
}

impl<'a> Mul<&'a DPoly> for &'a DPoly {
    type Output = DPoly;
    fn mul(self, o: &DPoly) -> DPoly {
        let mut out = DPoly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &o.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl Mul for DPoly {
    type Output = DPoly;
    fn mul(self, o: DPoly) -> DPoly {
        &self * &o
    }
}

impl Mul<&GaussRat> for &DPoly {
    type Output = DPoly;
    fn mul(self, c: &GaussRat) -> DPoly {
        self.scale(c)
    }
}

impl Neg for DPoly {
    type Output = DPoly;
    fn neg(self) -> DPoly {
        DPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &DPoly {
    type Output = DPoly;
    fn neg(self) -> DPoly {
        self.scale(&GaussRat::int(-1))
    }
}

impl std::iter::Sum for DPoly {
    fn sum<I: Iterator<Item = DPoly>>(iter: I) -> DPoly {
        let mut acc = DPoly::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}

fn fmt_term(m: &Monomial, c: &GaussRat) -> String {
    if m.is_one() {
        return c.to_string();
    }
    if c.is_one() {
        return m.to_string();
    }
    if *c == GaussRat::int(-1) {
        return format!("-{m}");
    }
    format!("{c}*{m}")
}

impl fmt::Display for DPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let t = fmt_term(m, c);
            if k == 0 {
                write!(f, "{t}")?;
            } else if let Some(rest) = t.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {t}")?;
            }
        }
        Ok(())
    }
}
