//! Exact arithmetic kernel: integers, jet variables, polynomials, gcd,
//! normalized rational expressions, derivations and the `s² = 2A` extension.

pub mod frame;
pub mod gcd;
pub mod int;
pub mod poly;
pub mod rde;
pub mod scalar;
pub mod sqrt_ext;
pub mod stats;
pub mod var;

pub use frame::{Frame, FrameKind, DEFAULT_MAX_ORDER};
pub use gcd::{gcd, lcm};
pub use int::Int;
pub use poly::{Mono, Poly};
pub use rde::Rde;
pub use scalar::Scalar;
pub use sqrt_ext::{SqrtCtx, SqrtExt};
pub use var::{Func, Param, Symbol, Var};

/// Exact rationals used for numeric parameters.
pub type Rational = num_rational::BigRational;
