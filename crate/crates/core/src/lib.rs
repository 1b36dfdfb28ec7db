#![allow(clippy::needless_range_loop)]

//! Exact computations for the Drinfeld double `D(G)` of a finite group:
//! concrete groups, character tables over cyclotomic integers, higher
//! Frobenius-Schur indicators, linear systems over finite abelian groups
//! and the substitution groups used for lower bounds on `k(D(G))`.

pub mod abelian;
pub mod bounds;
pub mod chartab;
pub mod cyclotomic;
pub mod double;
pub mod error;
pub mod group;
pub mod partition;

pub use error::{Error, Result};
