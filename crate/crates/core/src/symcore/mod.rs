//! Exact differential-polynomial ring.

mod dpoly;
mod gauss;
mod integrate;
mod monomial;
mod ode;
mod parse;
mod symbol;

pub use dpoly::{prettify, DPoly};
pub use gauss::GaussRat;
pub use integrate::{integrate_by_parts, integrate_exact, integrate_polynomial, Quadrature};
pub use monomial::Monomial;
pub use ode::{pseudo_reduce, reduce_mod_ode, OdeRelation};
pub use parse::{parse_expr, parse_symbol, parse_var, parse_with, Names};
pub use symbol::{a_name, f_name, Deps, Jet, Symbol, Var};

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binom(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r as i64
}

pub fn factorial(n: i64) -> i64 {
    (1..=n).product::<i64>().max(1)
}
