//! Deterministic random instances. The same seed yields the same sequence on
//! every platform, so reports and acceptance runs are reproducible.

use crate::diffalg::{Rde, Var};
use crate::gl3::GL3Matrix;
use crate::matrix::Matrix;
use crate::typea::{MobiusParameters, TypeACoefficients};
use crate::typeb::{FSpec, OmegaMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct InstanceRng(ChaCha8Rng);

impl InstanceRng {
    pub fn new(seed: u64) -> InstanceRng {
        InstanceRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[-bound, bound]`.
    pub fn int(&mut self, bound: i64) -> i64 {
        self.0.gen_range(-bound..=bound)
    }

    pub fn omega(&mut self, bound: i64) -> OmegaMatrix {
        OmegaMatrix::from_ints(std::array::from_fn(|_| std::array::from_fn(|_| self.int(bound))))
    }

    /// Resamples until `det Λ ≠ 0`.
    pub fn gl3(&mut self, bound: i64) -> GL3Matrix {
        loop {
            let rows: Vec<Vec<i64>> = (0..3).map(|_| (0..3).map(|_| self.int(bound)).collect()).collect();
            if let Ok(m) = GL3Matrix::new(Matrix::from_ints(&rows)) {
                return m;
            }
        }
    }

    /// Resamples until `Δ ≠ 0`.
    pub fn mobius(&mut self, bound: i64) -> MobiusParameters {
        loop {
            let [a, b, c, d] = std::array::from_fn(|_| self.int(bound));
            if let Ok(m) = MobiusParameters::from_ints(a, b, c, d) {
                return m;
            }
        }
    }

    pub fn type_a(&mut self, bound: i64) -> TypeACoefficients {
        let a = std::array::from_fn(|_| self.int(bound));
        let b = std::array::from_fn(|_| self.int(bound));
        TypeACoefficients::from_ints(a, b, self.int(bound))
    }
}

/// The standard choices of `f`: formal, `z²`, `z³`, `z³ + z²`, `z⁴ − z`.
pub fn standard_fspecs() -> Vec<(&'static str, FSpec)> {
    let z = Rde::var(Var::z());
    vec![
        ("formal", FSpec::Formal),
        ("z^2", FSpec::Concrete(z.pow(2))),
        ("z^3", FSpec::Concrete(z.pow(3))),
        ("z^3+z^2", FSpec::Concrete(z.pow(3).add(&z.pow(2)))),
        ("z^4-z", FSpec::Concrete(z.pow(4).sub(&z))),
    ]
}
