//! Exact symbolic verification of type B 3-fold supersymmetric systems.
//!
//! Every scalar is a normalized quotient of integer polynomials in jet
//! variables, so each identity is checked as an exact zero residual.

pub mod diffalg;
pub mod error;
pub mod gl3;
pub mod instances;
pub mod matrix;
pub mod operators;
pub mod report;
pub mod transform;
pub mod typea;
pub mod typeb;

pub use error::{KernelError, Result};
