//! Common interface for coefficient scalars, so operator and q-space formulas
//! are written once for both plain expressions and the quadratic extension.

use super::frame::Frame;
use super::rde::Rde;
use super::sqrt_ext::SqrtExt;
use crate::error::Result;
use std::fmt;

pub trait Scalar: Clone + PartialEq + fmt::Display + fmt::Debug + Send + Sync {
    /// Embeds an expression in the same ring as `self`.
    fn lift(&self, r: Rde) -> Self;
    fn s_add(&self, o: &Self) -> Self;
    fn s_sub(&self, o: &Self) -> Self;
    fn s_mul(&self, o: &Self) -> Self;
    fn s_neg(&self) -> Self;
    fn s_inv(&self) -> Result<Self>;
    fn s_derive(&self, frame: &Frame) -> Result<Self>;
    fn s_is_zero(&self) -> bool;
    fn size(&self) -> usize;
    fn to_latex(&self) -> String;

    fn zero_like(&self) -> Self {
        self.lift(Rde::zero())
    }

    fn one_like(&self) -> Self {
        self.lift(Rde::one())
    }

    fn int_like(&self, c: i64) -> Self {
        self.lift(Rde::int(c))
    }

    fn ratio_like(&self, p: i64, q: i64) -> Self {
        self.lift(Rde::ratio(p, q))
    }

    fn s_scale(&self, p: i64, q: i64) -> Self {
        self.s_mul(&self.ratio_like(p, q))
    }

    fn s_pow(&self, e: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = acc.s_mul(self);
        }
        acc
    }
}

impl Scalar for Rde {
    fn lift(&self, r: Rde) -> Self {
        r
    }
    fn s_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn s_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn s_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn s_neg(&self) -> Self {
        self.neg()
    }
    fn s_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn s_derive(&self, frame: &Frame) -> Result<Self> {
        frame.derive(self)
    }
    fn s_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn size(&self) -> usize {
        self.term_count()
    }
    fn to_latex(&self) -> String {
        self.latex()
    }
    fn s_pow(&self, e: u32) -> Self {
        self.pow(e)
    }
}

impl Scalar for SqrtExt {
    fn lift(&self, r: Rde) -> Self {
        SqrtExt::even_part(self.ctx(), r)
    }
    fn s_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn s_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn s_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn s_neg(&self) -> Self {
        self.neg()
    }
    fn s_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn s_derive(&self, frame: &Frame) -> Result<Self> {
        self.derive(frame)
    }
    fn s_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn size(&self) -> usize {
        self.even().term_count() + self.odd().term_count()
    }
    fn to_latex(&self) -> String {
        self.latex()
    }
}
