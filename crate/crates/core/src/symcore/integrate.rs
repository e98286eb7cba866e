//! Heuristic antidifferentiation of differential polynomials.

use super::dpoly::DPoly;
use super::gauss::GaussRat;
use super::monomial::Monomial;
use super::symbol::{Jet, Symbol, Var};

const STEP_LIMIT: usize = 20_000;

/// Result of [`integrate_by_parts`]: `∂v antiderivative + residual = input`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature {
    pub antiderivative: DPoly,
    pub residual: DPoly,
}

fn order_in(j: &Jet, v: Var) -> Option<i32> {
    j.deps.slot(v).map(|s| j.orders[s])
}

/// The `v`-dependent jet of highest `v`-order in `m`, with its exponent.
fn top_jet(m: &Monomial, v: Var) -> Option<(Jet, i32, i32)> {
    let mut best: Option<(Jet, i32, i32)> = None;
    for (s, e) in m.factors() {
        if let Symbol::Jet(j) = s {
            if let Some(o) = order_in(j, v) {
                let better = match &best {
                    None => true,
                    Some((bj, bo, _)) => o > *bo || (o == *bo && j > bj),
                };
                if better {
                    best = Some((j.clone(), o, *e));
                }
            }
        }
    }
    best
}

/// Number of distinct `v`-jets sharing the top order.
fn ties_at(m: &Monomial, v: Var, order: i32) -> usize {
    m.factors()
        .iter()
        .filter(|(s, _)| matches!(s, Symbol::Jet(j) if order_in(j, v) == Some(order)))
        .count()
}

/// Integrate `p` with respect to `v`. Terms without `v`-jets are integrated
/// as polynomials; a jet of top order appearing linearly is integrated by
/// parts, recognising total derivatives `D·(J')·J^e`. Products that are
/// nonlinear in the top jet are returned in the residual. Linear jets of
/// order ≤ 0 with jet-free cofactors produce negative-order jets.
pub fn integrate_by_parts(p: &DPoly, v: Var) -> Quadrature {
    let vs = Symbol::Var(v);
    let mut work = p.clone();
    let mut anti = DPoly::zero();
    let mut residual = DPoly::zero();
    let mut steps = 0usize;

    while !work.is_zero() {
        steps += 1;
        if steps > STEP_LIMIT {
            residual += &work;
            break;
        }
        // Highest top-order term first, so that by-parts remainders
        // (which are of lower order) are handled later.
        let (m, c) = {
            let mut pick: Option<(&Monomial, &GaussRat, i32)> = None;
            for (m, c) in work.terms() {
                let o = top_jet(m, v).map(|t| t.1).unwrap_or(i32::MIN);
                if pick.as_ref().map_or(true, |(_, _, po)| o > *po) {
                    pick = Some((m, c, o));
                }
            }
            let (m, c, _) = pick.unwrap();
            (m.clone(), c.clone())
        };
        let term = DPoly::term(m.clone(), c.clone());

        let Some((top, order, e)) = top_jet(&m, v) else {
            let k = m.exponent(&vs);
            let piece = DPoly::term(
                m.with_delta(&vs, 1),
                &c * &GaussRat::frac(1, (k + 1) as i64),
            );
            work -= &piece.differentiate(v);
            anti += piece;
            continue;
        };

        let tsym = Symbol::Jet(top.clone());
        if e != 1 || ties_at(&m, v, order) > 1 {
            residual += &term;
            work -= &term;
            continue;
        }
        let cof = m.with_delta(&tsym, -1);
        let below = top.lifted(v, -1).expect("jet depends on v");
        let bsym = Symbol::Jet(below.clone());
        let eb = cof.exponent(&bsym);

        let piece = if eb > 0 {
            let d = cof.with_delta(&bsym, -eb);
            DPoly::term(
                d.with_delta(&bsym, eb + 1),
                &c * &GaussRat::frac(1, (eb + 1) as i64),
            )
        } else {
            let cof_has_jets = cof
                .factors()
                .iter()
                .any(|(s, _)| matches!(s, Symbol::Jet(j) if j.deps.contains(v)));
            if order <= 0 && cof_has_jets {
                residual += &term;
                work -= &term;
                continue;
            }
            DPoly::term(cof.with_delta(&bsym, 1), c.clone())
        };
        work -= &piece.differentiate(v);
        anti += piece;
    }
    Quadrature {
        antiderivative: anti,
        residual,
    }
}

/// Antiderivative in `v`, or `None` if anything is left over.
pub fn integrate_exact(p: &DPoly, v: Var) -> Option<DPoly> {
    let q = integrate_by_parts(p, v);
    if q.residual.is_zero() {
        Some(q.antiderivative)
    } else {
        None
    }
}

/// Antiderivative of a polynomial in `v` whose coefficients are `v`-free.
pub fn integrate_polynomial(p: &DPoly, v: Var) -> DPoly {
    let vs = Symbol::Var(v);
    let mut out = DPoly::zero();
    for (m, c) in p.terms() {
        debug_assert!(!m.factors().iter().any(|(s, _)| *s != vs && s.depends_on(v)));
        let k = m.exponent(&vs);
        out.add_term(m.with_delta(&vs, 1), c * &GaussRat::frac(1, (k + 1) as i64));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(p: &DPoly, v: Var) -> Quadrature {
        let q = integrate_by_parts(p, v);
        assert_eq!(&q.antiderivative.differentiate(v) + &q.residual, *p);
        q
    }

    #[test]
    fn exact_derivative() {
        let q = check(&DPoly::jet("V1", 1), Var::X);
        assert_eq!(q.antiderivative, DPoly::jet("V1", 0));
        assert!(q.residual.is_zero());
    }

    #[test]
    fn total_derivative() {
        let p = &DPoly::jet("V1", 0) * &DPoly::jet("V1", 1);
        let q = check(&p, Var::X);
        assert_eq!(
            q.antiderivative,
            DPoly::jet("V1", 0).pow(2).scale(&GaussRat::frac(1, 2))
        );
        assert!(q.residual.is_zero());
    }

    #[test]
    fn by_parts_introduces_antiderivative_jet() {
        let p = &DPoly::x() * &DPoly::jet("V1", 1);
        let q = check(&p, Var::X);
        let expect = &(&DPoly::x() * &DPoly::jet("V1", 0)) - &DPoly::jet("V1", -1);
        assert_eq!(q.antiderivative, expect);
        assert!(q.antiderivative.has_negative_jets());
    }

    #[test]
    fn nonlinear_top_goes_to_residual() {
        let p = DPoly::jet("V1", 1).pow(2);
        let q = check(&p, Var::X);
        assert_eq!(q.residual, p);
    }

    #[test]
    fn constants_in_other_variable() {
        let p = &(&DPoly::y() * &DPoly::jet("V1", 2)) + &DPoly::jet("V2", 1);
        let q = check(&p, Var::Y);
        assert!(q.residual.is_zero());
        assert_eq!(
            q.antiderivative,
            &(&DPoly::y().pow(2) * &DPoly::jet("V1", 2)).scale(&GaussRat::frac(1, 2))
                + &DPoly::jet("V2", 0)
        );
    }
}
