//! Arithmetic of the rational function field F_q(t), q odd: places, Hilbert symbols,
//! ray class groups, quaternion algebras and semilocal-ring definability checks.

pub mod error;
pub mod ffcore;
pub mod places;
pub mod quaternion;
pub mod rayclass;
pub mod selftest;
pub mod definability;
pub mod symbols;

pub use error::{Error, Result};
