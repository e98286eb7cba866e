//! Symbols of the differential-polynomial ring.

use std::fmt;
use std::sync::Arc;

/// Base (independent) variables.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

/// Which base variables a dependent function depends on.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Deps {
    X,
    Y,
    Z,
    XY,
}

impl Deps {
    pub fn contains(self, v: Var) -> bool {
        matches!(
            (self, v),
            (Deps::X, Var::X)
                | (Deps::Y, Var::Y)
                | (Deps::Z, Var::Z)
                | (Deps::XY, Var::X)
                | (Deps::XY, Var::Y)
        )
    }

    /// Slot of `v` in a jet's order array.
    pub fn slot(self, v: Var) -> Option<usize> {
        match (self, v) {
            (Deps::XY, Var::Y) => Some(1),
            _ if self.contains(v) => Some(0),
            _ => None,
        }
    }

    /// The variable of a single-variable dependency.
    pub fn single(self) -> Option<Var> {
        match self {
            Deps::X => Some(Var::X),
            Deps::Y => Some(Var::Y),
            Deps::Z => Some(Var::Z),
            Deps::XY => None,
        }
    }

    pub fn arity(self) -> usize {
        if self == Deps::XY {
            2
        } else {
            1
        }
    }

    fn label(self) -> &'static str {
        match self {
            Deps::X => "x",
            Deps::Y => "y",
            Deps::Z => "z",
            Deps::XY => "x,y",
        }
    }

    /// Dependency assumed when a name is written without annotation.
    pub fn default_for(name: &str) -> Deps {
        if name == "V1" {
            Deps::X
        } else if name == "V2" {
            Deps::Y
        } else if name.starts_with("f_") {
            Deps::XY
        } else {
            Deps::Z
        }
    }
}

/// A derivative of a named dependent function. Orders may be negative,
/// which denotes repeated antiderivatives.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Jet {
    pub name: Arc<str>,
    pub deps: Deps,
    pub orders: [i32; 2],
}

impl Jet {
    pub fn new(name: &str, deps: Deps, orders: [i32; 2]) -> Self {
        Jet {
            name: Arc::from(name),
            deps,
            orders,
        }
    }

    /// Single-variable jet with default dependency.
    pub fn of(name: &str, order: i32) -> Self {
        Jet::new(name, Deps::default_for(name), [order, 0])
    }

    pub fn order(&self) -> i32 {
        self.orders[0] + self.orders[1]
    }

    pub fn lifted(&self, v: Var, by: i32) -> Option<Jet> {
        let s = self.deps.slot(v)?;
        let mut j = self.clone();
        j.orders[s] += by;
        Some(j)
    }

    pub fn same_function(&self, other: &Jet) -> bool {
        self.name == other.name && self.deps == other.deps
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if self.deps != Deps::default_for(&self.name) {
            write!(f, "[{}]", self.deps.label())?;
        }
        if self.deps.arity() == 2 {
            if self.orders != [0, 0] {
                write!(f, "^({},{})", self.orders[0], self.orders[1])?;
            }
        } else if self.orders[0] != 0 {
            write!(f, "^({})", self.orders[0])?;
        }
        Ok(())
    }
}

/// A ring generator. The derived order (variables, then hbar, then
/// parameters, then jets) is the monomial order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Symbol {
    Var(Var),
    Hbar,
    Param(Arc<str>),
    Jet(Jet),
}

impl Symbol {
    pub fn param(name: &str) -> Self {
        Symbol::Param(Arc::from(name))
    }

    pub fn jet(name: &str, order: i32) -> Self {
        Symbol::Jet(Jet::of(name, order))
    }

    /// Parameters and hbar may carry negative exponents.
    pub fn is_invertible(&self) -> bool {
        matches!(self, Symbol::Hbar | Symbol::Param(_))
    }

    pub fn depends_on(&self, v: Var) -> bool {
        match self {
            Symbol::Var(w) => *w == v,
            Symbol::Jet(j) => j.deps.contains(v),
            _ => false,
        }
    }

    pub fn as_jet(&self) -> Option<&Jet> {
        match self {
            Symbol::Jet(j) => Some(j),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Var(v) => write!(f, "{}", v.name()),
            Symbol::Hbar => write!(f, "hbar"),
            Symbol::Param(p) => write!(f, "{p}"),
            Symbol::Jet(j) => write!(f, "{j}"),
        }
    }
}

/// Name of the coefficient `A_{a,m,n}`.
pub fn a_name(a: usize, m: usize, n: usize) -> String {
    format!("A_{a}_{m}_{n}")
}

/// Name of the unknown coefficient function `f_{j,k}`.
pub fn f_name(j: usize, k: usize) -> String {
    format!("f_{j}_{k}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_var_hbar_param_jet() {
        let v = Symbol::Var(Var::Z);
        let h = Symbol::Hbar;
        let p = Symbol::param("a0");
        let j = Symbol::jet("F", 0);
        assert!(v < h && h < p && p < j);
    }

    #[test]
    fn jet_display() {
        assert_eq!(Jet::of("V1", 3).to_string(), "V1^(3)");
        assert_eq!(Jet::of("F", 0).to_string(), "F");
        assert_eq!(
            Jet::new("f_0_2", Deps::XY, [1, 1]).to_string(),
            "f_0_2^(1,1)"
        );
        assert_eq!(Jet::new("F", Deps::X, [2, 0]).to_string(), "F[x]^(2)");
        assert_eq!(Jet::of("V2", -1).to_string(), "V2^(-1)");
    }
}
