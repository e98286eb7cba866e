//! Compatibility analysis of the determining equations.

mod chain;
mod constants;
mod lcc;
mod nlcc;
mod solve;
mod trivial;

pub use chain::{chain_eliminate, level_chain, ChainSystem};
pub use constants::{solve_constants, ConstSolution};
pub use lcc::{classification_report, classify, lcc, Classification, ExoticClass, Lcc};
pub use nlcc::{
    constant_coefficients, match_ode, nlcc, ordered_params, separate, separated_odes, to_profile,
    MatchReport, Nlcc, Profile, Separated, SeparatedOdes,
};
pub use solve::{solve_chain, ChainSolution};
pub use trivial::{
    doubly_exotic_terms, is_pure_momentum, reduce_trivial, table_reduced, table_w, Removal,
    RemovalReason, TrivialReduction,
};
