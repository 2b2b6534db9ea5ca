//! Configuration, orchestration and rendering behind the `nfold` binary.

pub mod config;
pub mod expr;
pub mod render;
pub mod run;
