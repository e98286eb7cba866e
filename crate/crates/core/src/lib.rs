//! Computer algebra for separable superintegrable quantum systems with
//! integrals of arbitrary order: determining equations, compatibility
//! conditions and Painleve analysis of the resulting ODEs.

pub mod error;
pub mod symcore;

pub use error::{Error, Result};
pub mod catalog;
pub mod compat;
pub mod deteq;
pub mod opalg;
pub mod painleve;
