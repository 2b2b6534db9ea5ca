//! Derivations. A frame names the independent variable and fixes how d/d(base)
//! acts on every declared jet.

use super::int::Int;
use super::poly::{Mono, Poly};
use super::rde::Rde;
use super::var::{Func, Var};
use crate::error::{KernelError, Result};
use std::fmt;

pub const DEFAULT_MAX_ORDER: u8 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameKind {
    /// Base `z`; `f` and test functions are functions of `z`.
    Z,
    /// Base `w`; `f`, `φᵢ` and test functions are functions of `w`.
    W,
    /// Base `q`; `z(q)` is a jet, `f` is composed with `z`, and `E`, `W`, `F`,
    /// the invariants and test functions are free jets.
    Q,
    /// Base `q` with `w(q)` a jet; `f` and `φᵢ` are composed with `w`.
    WOverQ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    pub kind: FrameKind,
    pub max_order: u8,
}

impl Frame {
    pub fn new(kind: FrameKind) -> Frame {
        Frame { kind, max_order: DEFAULT_MAX_ORDER }
    }

    pub fn z() -> Frame {
        Frame::new(FrameKind::Z)
    }

    pub fn w() -> Frame {
        Frame::new(FrameKind::W)
    }

    pub fn q() -> Frame {
        Frame::new(FrameKind::Q)
    }

    pub fn w_over_q() -> Frame {
        Frame::new(FrameKind::WOverQ)
    }

    pub fn with_max_order(self, max_order: u8) -> Frame {
        Frame { max_order, ..self }
    }

    /// The base variable as a jet.
    pub fn base(&self) -> Var {
        match self.kind {
            FrameKind::Z => Var::z(),
            FrameKind::W => Var::w(),
            FrameKind::Q | FrameKind::WOverQ => Var::q(),
        }
    }

    /// The derivative of a single variable as a monomial (`None` is zero).
    pub fn derive_var(&self, v: Var) -> Result<Option<Mono>> {
        let Some((func, k)) = v.as_jet() else {
            return Ok(None);
        };
        let undeclared = || KernelError::Frame { var: v.to_string(), frame: self.to_string() };
        use FrameKind::*;
        let chain = match (self.kind, func) {
            (Z, Func::Z) | (W, Func::W) | (Q | WOverQ, Func::Q) => {
                return if k == 0 { Ok(Some(Mono::one())) } else { Err(undeclared()) };
            }
            (Z | W, Func::F | Func::Test(_) | Func::Speed) | (W, Func::Phi(_)) => None,
            (Q, Func::Z) | (WOverQ, Func::W) => None,
            (Q, Func::F) => Some(Var::jet(Func::Z, 1)),
            (WOverQ, Func::F | Func::Phi(_)) => Some(Var::jet(Func::W, 1)),
            (Q | WOverQ, Func::E | Func::Super | Func::FQ | Func::Inv(_) | Func::Test(_)) => None,
            _ => return Err(undeclared()),
        };
        if k >= self.max_order {
            return Err(KernelError::Budget { var: v.to_string(), max: self.max_order });
        }
        super::stats::record_jet_order(k as usize + 1);
        let next = Mono::var(v.next_order());
        Ok(Some(match chain {
            Some(c) => next.mul(&Mono::var(c)),
            None => next,
        }))
    }

    pub fn derive_poly(&self, p: &Poly) -> Result<Poly> {
        let mut terms = Vec::new();
        let mut cache: Vec<(Var, Option<Mono>)> = Vec::new();
        for (m, c) in p.terms() {
            for &(v, e) in m.factors() {
                let dv = match cache.iter().find(|x| x.0 == v) {
                    Some(x) => x.1.clone(),
                    None => {
                        let d = self.derive_var(v)?;
                        cache.push((v, d.clone()));
                        d
                    }
                };
                let Some(dv) = dv else { continue };
                let (_, rest) = m.split_var(v);
                let mono = rest.mul(&Mono::var_pow(v, e - 1)).mul(&dv);
                terms.push((mono, c * &Int::from(e as i64)));
            }
        }
        Ok(Poly::from_terms(terms))
    }

    /// Quotient rule, reduced through `gcd(den, den′)` before normalization.
    pub fn derive(&self, x: &Rde) -> Result<Rde> {
        let dn = self.derive_poly(x.num())?;
        if x.den().is_one() {
            return Ok(Rde::from_poly(dn));
        }
        let dd = self.derive_poly(x.den())?;
        if dd.is_zero() {
            return Rde::new(dn, x.den().clone());
        }
        let h = super::gcd::gcd(x.den(), &dd);
        let d_h = x.den().div_exact(&h).expect("gcd divides");
        let dd_h = dd.div_exact(&h).expect("gcd divides");
        let num = dn.mul(&d_h).sub(&x.num().mul(&dd_h));
        Rde::new(num, x.den().mul(&d_h))
    }

    /// `k`-fold derivative.
    pub fn derive_n(&self, x: &Rde, k: usize) -> Result<Rde> {
        let mut out = x.clone();
        for _ in 0..k {
            out = self.derive(&out)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            FrameKind::Z => "z",
            FrameKind::W => "w",
            FrameKind::Q => "q",
            FrameKind::WOverQ => "w-over-q",
        };
        write!(f, "{name}")
    }
}
