//! Monomials: sorted products of symbols with integer exponents.

use std::fmt;

use super::symbol::{Symbol, Var};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<(Symbol, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_symbol(s: Symbol, e: i32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(s, e)])
        }
    }

    /// Build from arbitrary factors, merging repeats.
    pub fn from_factors<I: IntoIterator<Item = (Symbol, i32)>>(it: I) -> Self {
        let mut v: Vec<(Symbol, i32)> = it.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Symbol, i32)> = Vec::with_capacity(v.len());
        for (s, e) in v {
            match out.last_mut() {
                Some((t, f)) if *t == s => *f += e,
                _ => out.push((s, e)),
            }
        }
        out.retain(|(_, e)| *e != 0);
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Symbol, i32)] {
        &self.0
    }

    pub fn exponent(&self, s: &Symbol) -> i32 {
        match self.0.binary_search_by(|(t, _)| t.cmp(s)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn pow(&self, e: i32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(s, f)| (s.clone(), f * e)).collect())
    }

    /// Monomial with the exponent of `s` changed by `delta`.
    pub fn with_delta(&self, s: &Symbol, delta: i32) -> Monomial {
        self.mul(&Monomial::from_symbol(s.clone(), delta))
    }

    /// Split into the part made of symbols satisfying `pred` and the rest.
    pub fn split<F: Fn(&Symbol) -> bool>(&self, pred: F) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(s, _)| pred(s));
        (Monomial(a), Monomial(b))
    }

    /// True if every exponent is non-negative on symbols that are not invertible.
    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|(s, e)| *e > 0 || s.is_invertible())
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.0.iter().any(|(s, _)| s.depends_on(v))
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    /// Divide by `d` if `d` divides self in the polynomial sense.
    pub fn checked_div(&self, d: &Monomial) -> Option<Monomial> {
        let q = self.mul(&d.pow(-1));
        if q.is_polynomial() {
            Some(q)
        } else {
            None
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{s}")?;
            if *e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_and_cancel() {
        let x = Symbol::Var(Var::X);
        let h = Symbol::Hbar;
        let a = Monomial::from_factors([(x.clone(), 2), (h.clone(), 1)]);
        let b = Monomial::from_factors([(h.clone(), -1), (x.clone(), 1)]);
        assert_eq!(a.mul(&b), Monomial::from_symbol(x, 3));
    }
}
