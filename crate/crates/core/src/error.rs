use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("unknown identifier `{name}` at line {line}, column {col}{}", suggest(.suggestions))]
    UnknownIdent {
        name: String,
        line: usize,
        col: usize,
        suggestions: Vec<String>,
    },

    #[error("leading coefficient `{0}` is not invertible")]
    NotInvertible(String),

    #[error("integral is not of order {0}: all leading coefficients vanish")]
    ZeroAnsatz(usize),

    #[error("unknown catalog id `{0}`")]
    UnknownCatalogId(String),

    #[error("chain elimination left unknowns behind: {0}")]
    MalformedChain(String),

    #[error("quadrature failed at level {level}: unabsorbable term `{term}`")]
    Quadrature { level: usize, term: String },

    #[error("invalid ODE specification: {0}")]
    BadOde(String),

    #[error("{0}")]
    Invalid(String),
}

fn suggest(s: &[String]) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!(" (did you mean {}?)", s.join(", "))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
