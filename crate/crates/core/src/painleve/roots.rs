//! Rational roots of univariate rational polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Roots found by the rational root theorem, with multiplicity, and the
/// cofactor that has no rational roots (coefficients low to high).
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<(BigRational, u32)>,
    pub rest: Vec<BigRational>,
}

impl RootSet {
    pub fn is_complete(&self) -> bool {
        self.rest.len() <= 1
    }

    /// All roots, repeated by multiplicity, ascending.
    pub fn flat(&self) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = self
            .roots
            .iter()
            .flat_map(|(r, m)| std::iter::repeat(r.clone()).take(*m as usize))
            .collect();
        v.sort();
        v
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Divide by `(x - r)`, assuming `r` is a root.
fn deflate(p: &[BigRational], r: &BigRational) -> Vec<BigRational> {
    let n = p.len() - 1;
    let mut q = vec![BigRational::zero(); n];
    let mut carry = BigRational::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + &carry * r;
        q[i] = carry.clone();
    }
    q
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    // Prime factorisation by trial division; the integers here are small.
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1;
        if d.to_u64().is_none_or(|v| v > 10_000_000) {
            break;
        }
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for base in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(base * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out
}

/// Rational roots of `Σ coeffs[i] x^i`.
pub fn rational_roots(coeffs: &[BigRational]) -> RootSet {
    let mut p = coeffs.to_vec();
    trim(&mut p);
    let mut roots: Vec<(BigRational, u32)> = Vec::new();
    let push = |roots: &mut Vec<(BigRational, u32)>, r: BigRational| match roots
        .iter_mut()
        .find(|(x, _)| *x == r)
    {
        Some((_, m)) => *m += 1,
        None => roots.push((r, 1)),
    };
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        push(&mut roots, BigRational::zero());
    }
    if p.len() <= 1 {
        return RootSet { roots, rest: p };
    }
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let nums = divisors(&ints[0]);
    let dens = divisors(ints.last().unwrap());
    let mut cands: Vec<BigRational> = Vec::new();
    for a in &nums {
        for b in &dens {
            let r = BigRational::new(a.clone(), b.clone());
            cands.push(r.clone());
            cands.push(-r);
        }
    }
    cands.sort();
    cands.dedup();
    for r in cands {
        while p.len() > 1 && eval(&p, &r).is_zero() {
            p = deflate(&p, &r);
            push(&mut roots, r.clone());
        }
    }
    roots.sort();
    RootSet { roots, rest: p }
}
