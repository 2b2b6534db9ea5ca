//! Variables of the differential polynomial ring.
//!
//! Every indeterminate is packed into a single `u32` so monomials stay small and
//! comparisons are integer comparisons. The packed order is the canonical
//! variable order used by the degree-lexicographic monomial order: a smaller
//! key is a more significant variable.

use std::fmt;

/// Formal functions whose jets (successive derivatives) are ring variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    /// The independent variable `q` of the physical space.
    Q,
    /// `z`: base variable of the z-space, or `z(q)` in the q-space.
    Z,
    /// `w`: base variable of the w-space, or `w(q)` over q.
    W,
    /// The type B function `f`.
    F,
    /// Frame functions `φ₁, φ₂, φ₃` (index 1..=3).
    Phi(u8),
    /// The q-space function `E(q)`.
    E,
    /// The q-space superpotential `W(q)`.
    Super,
    /// The q-space function `F(q)`.
    FQ,
    /// Invariant functions `I₁, I₂, I₃` treated as free indeterminates.
    Inv(u8),
    /// Free test functions `u₀, u₁, …` of the base variable.
    Test(u8),
    /// `σ`, the square of the q-derivative of the base variable, viewed as a
    /// function of the base.
    Speed,
}

/// Constant parameters. They differentiate to zero in every frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    /// Entry `(row, col)` of the parameter matrix Ω, 0-based.
    Omega(u8, u8),
    /// Entry `(row, col)` of a GL(3) matrix Λ, 0-based.
    Lambda(u8, u8),
    /// Möbius parameters α, β, γ, δ (index 0..=3).
    Mobius(u8),
    /// Type A coefficients: `a₀..a₄` are 0..=4, `b₀..b₂` are 5..=7, `R` is 8.
    TypeA(u8),
    /// The spectral variable of the characteristic polynomial.
    Spectral,
    /// Free named symbol used by tests and generic checks.
    Named(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Jet(Func, u8),
    Param(Param),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

const PARAM_KIND: u32 = 16;

impl Var {
    pub fn jet(func: Func, order: u8) -> Var {
        let (kind, a) = match func {
            Func::Q => (0, 0),
            Func::Z => (1, 0),
            Func::W => (2, 0),
            Func::F => (3, 0),
            Func::Phi(i) => (4, i),
            Func::E => (5, 0),
            Func::Super => (6, 0),
            Func::FQ => (7, 0),
            Func::Inv(i) => (8, i),
            Func::Test(i) => (9, i),
            Func::Speed => (10, 0),
        };
        Var((kind << 24) | ((a as u32) << 16) | order as u32)
    }

    pub fn param(p: Param) -> Var {
        let (family, index) = match p {
            Param::Omega(r, c) => (0u32, r * 3 + c),
            Param::Lambda(r, c) => (1, r * 3 + c),
            Param::Mobius(i) => (2, i),
            Param::TypeA(i) => (3, i),
            Param::Spectral => (4, 0),
            Param::Named(i) => (5, i),
        };
        Var((PARAM_KIND << 24) | (family << 16) | ((index as u32) << 8))
    }

    pub fn symbol(self) -> Symbol {
        let kind = self.0 >> 24;
        let a = ((self.0 >> 16) & 0xff) as u8;
        let b = ((self.0 >> 8) & 0xff) as u8;
        let order = (self.0 & 0xff) as u8;
        if kind == PARAM_KIND {
            let p = match a {
                0 => Param::Omega(b / 3, b % 3),
                1 => Param::Lambda(b / 3, b % 3),
                2 => Param::Mobius(b),
                3 => Param::TypeA(b),
                4 => Param::Spectral,
                _ => Param::Named(b),
            };
            return Symbol::Param(p);
        }
        let func = match kind {
            0 => Func::Q,
            1 => Func::Z,
            2 => Func::W,
            3 => Func::F,
            4 => Func::Phi(a),
            5 => Func::E,
            6 => Func::Super,
            7 => Func::FQ,
            8 => Func::Inv(a),
            9 => Func::Test(a),
            _ => Func::Speed,
        };
        Symbol::Jet(func, order)
    }

    /// The function and derivative order, for jet variables.
    pub fn as_jet(self) -> Option<(Func, u8)> {
        match self.symbol() {
            Symbol::Jet(f, k) => Some((f, k)),
            Symbol::Param(_) => None,
        }
    }

    pub fn is_param(self) -> bool {
        self.0 >> 24 == PARAM_KIND
    }

    /// Same function, one derivative higher.
    pub fn next_order(self) -> Var {
        Var(self.0 + 1)
    }

    pub fn key(self) -> u32 {
        self.0
    }

    // Common shorthands.
    pub fn z() -> Var {
        Var::jet(Func::Z, 0)
    }
    pub fn w() -> Var {
        Var::jet(Func::W, 0)
    }
    pub fn q() -> Var {
        Var::jet(Func::Q, 0)
    }
    pub fn f(k: u8) -> Var {
        Var::jet(Func::F, k)
    }
    pub fn omega(r: u8, c: u8) -> Var {
        Var::param(Param::Omega(r, c))
    }
    pub fn lambda(r: u8, c: u8) -> Var {
        Var::param(Param::Lambda(r, c))
    }

    pub fn latex(self) -> String {
        match self.symbol() {
            Symbol::Jet(func, k) => {
                let base = match func {
                    Func::Q => "q".to_string(),
                    Func::Z => "z".to_string(),
                    Func::W => "w".to_string(),
                    Func::F => "f".to_string(),
                    Func::Phi(i) => format!("\\varphi_{{{i}}}"),
                    Func::E => "E".to_string(),
                    Func::Super => "W".to_string(),
                    Func::FQ => "F".to_string(),
                    Func::Inv(i) => format!("I_{{{i}}}"),
                    Func::Test(i) => format!("u_{{{i}}}"),
                    Func::Speed => "\\sigma".to_string(),
                };
                match k {
                    0 => base,
                    1..=3 => format!("{base}{}", "'".repeat(k as usize)),
                    _ => format!("{base}^{{({k})}}"),
                }
            }
            Symbol::Param(p) => match p {
                Param::Omega(r, c) => format!("{}_{{{c}}}", ["c", "b", "a"][r as usize]),
                Param::Lambda(r, c) => format!("\\lambda_{{{}{}}}", r + 1, c + 1),
                Param::Mobius(i) => ["\\alpha", "\\beta", "\\gamma", "\\delta"][i as usize].to_string(),
                Param::TypeA(i) => type_a_name(i, true),
                Param::Spectral => "\\mathcal{E}".to_string(),
                Param::Named(i) => format!("t_{{{i}}}"),
            },
        }
    }
}

fn type_a_name(i: u8, latex: bool) -> String {
    let (stem, idx) = match i {
        0..=4 => ("a", i),
        5..=7 => ("b", i - 5),
        _ => ("R", 0),
    };
    match (stem, latex) {
        ("R", true) => "R^{(\\mathrm{A})}".to_string(),
        ("R", false) => "RA".to_string(),
        (s, true) => format!("{s}_{{{idx}}}^{{(\\mathrm{{A}})}}"),
        (s, false) => format!("{s}{idx}A"),
    }
}

fn primes(k: u8) -> String {
    match k {
        0 => String::new(),
        1 => "′".into(),
        2 => "″".into(),
        3 => "‴".into(),
        _ => format!("^({k})"),
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.symbol() {
            Symbol::Jet(func, k) => {
                let base = match func {
                    Func::Q => "q".to_string(),
                    Func::Z => "z".to_string(),
                    Func::W => "w".to_string(),
                    Func::F => "f".to_string(),
                    Func::Phi(i) => format!("φ{i}"),
                    Func::E => "E".to_string(),
                    Func::Super => "W".to_string(),
                    Func::FQ => "F".to_string(),
                    Func::Inv(i) => format!("I{i}"),
                    Func::Test(i) => format!("u{i}"),
                    Func::Speed => "σ".to_string(),
                };
                write!(f, "{base}{}", primes(k))
            }
            Symbol::Param(p) => match p {
                Param::Omega(r, c) => write!(f, "{}{c}", ["c", "b", "a"][r as usize]),
                Param::Lambda(r, c) => write!(f, "λ{}{}", r + 1, c + 1),
                Param::Mobius(i) => write!(f, "{}", ["α", "β", "γ", "δ"][i as usize]),
                Param::TypeA(i) => write!(f, "{}", type_a_name(i, false)),
                Param::Spectral => write!(f, "ε"),
                Param::Named(i) => write!(f, "t{i}"),
            },
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_round_trips() {
        let syms = [
            Symbol::Jet(Func::F, 3),
            Symbol::Jet(Func::Phi(2), 1),
            Symbol::Jet(Func::Inv(3), 0),
            Symbol::Param(Param::Omega(2, 1)),
            Symbol::Param(Param::Lambda(0, 2)),
            Symbol::Param(Param::TypeA(8)),
            Symbol::Param(Param::Spectral),
        ];
        for s in syms {
            let v = match s {
                Symbol::Jet(f, k) => Var::jet(f, k),
                Symbol::Param(p) => Var::param(p),
            };
            assert_eq!(v.symbol(), s);
        }
    }

    #[test]
    fn next_order_and_names() {
        assert_eq!(Var::f(2).next_order(), Var::f(3));
        assert_eq!(Var::f(2).to_string(), "f″");
        assert_eq!(Var::omega(2, 1).to_string(), "a1");
        assert_eq!(Var::f(5).latex(), "f^{(5)}");
        assert!(Var::z() < Var::f(0));
        assert!(Var::lambda(0, 0).is_param());
    }
}
