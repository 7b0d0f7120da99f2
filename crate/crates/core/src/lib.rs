//! Exact arithmetic in real quadratic extensions of F_q(T) and the
//! machinery for approximating pairs in the completion by ratios with
//! prime denominators.

pub mod algebra;
pub mod laurent;
pub mod quadratic;
pub mod diophantine;
pub mod vaughan;
pub mod harness;
pub mod error;

pub use error::{Error, Result};
