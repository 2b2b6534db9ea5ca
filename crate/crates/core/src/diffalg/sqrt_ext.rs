//! The quadratic extension `even + odd·s` with `s² = 2A(z)`, where `s` stands
//! for `z′(q)`. Both parts are functions of `z`; the q-derivation is
//! `d/dq (a + b·s) = (2A·∂b + b·A′) + (∂a)·s`, with `∂ = d/dz`.

use super::frame::{Frame, FrameKind};
use super::rde::Rde;
use crate::error::{KernelError, Result};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, PartialEq, Eq)]
pub struct SqrtCtx {
    two_a: Rde,
    a_prime: Rde,
    z_frame: Frame,
}

impl SqrtCtx {
    /// Context for `s² = 2A`; `A` must be a nonzero function of `z`.
    pub fn new(a: &Rde, max_order: u8) -> Result<Arc<SqrtCtx>> {
        if a.is_zero() {
            return Err(KernelError::Degenerate("A ≡ 0, so z′ ≡ 0".into()));
        }
        let z_frame = Frame::z().with_max_order(max_order);
        Ok(Arc::new(SqrtCtx { two_a: a.scale(2), a_prime: z_frame.derive(a)?, z_frame }))
    }

    pub fn two_a(&self) -> &Rde {
        &self.two_a
    }

    pub fn a_prime(&self) -> &Rde {
        &self.a_prime
    }
}

#[derive(Clone)]
pub struct SqrtExt {
    even: Rde,
    odd: Rde,
    ctx: Arc<SqrtCtx>,
}

impl SqrtExt {
    pub fn new(even: Rde, odd: Rde, ctx: &Arc<SqrtCtx>) -> SqrtExt {
        SqrtExt { even, odd, ctx: ctx.clone() }
    }

    pub fn even_part(ctx: &Arc<SqrtCtx>, a: Rde) -> SqrtExt {
        SqrtExt::new(a, Rde::zero(), ctx)
    }

    pub fn odd_part(ctx: &Arc<SqrtCtx>, b: Rde) -> SqrtExt {
        SqrtExt::new(Rde::zero(), b, ctx)
    }

    /// The generator `s = z′`.
    pub fn s(ctx: &Arc<SqrtCtx>) -> SqrtExt {
        SqrtExt::odd_part(ctx, Rde::one())
    }

    pub fn even(&self) -> &Rde {
        &self.even
    }

    pub fn odd(&self) -> &Rde {
        &self.odd
    }

    pub fn ctx(&self) -> &Arc<SqrtCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn add(&self, o: &SqrtExt) -> SqrtExt {
        SqrtExt::new(self.even.add(&o.even), self.odd.add(&o.odd), &self.ctx)
    }

    pub fn sub(&self, o: &SqrtExt) -> SqrtExt {
        SqrtExt::new(self.even.sub(&o.even), self.odd.sub(&o.odd), &self.ctx)
    }

    pub fn neg(&self) -> SqrtExt {
        SqrtExt::new(self.even.neg(), self.odd.neg(), &self.ctx)
    }

    pub fn mul(&self, o: &SqrtExt) -> SqrtExt {
        let (a, b, c, d) = (&self.even, &self.odd, &o.even, &o.odd);
        let bd = b.mul(d);
        let even = a.mul(c).add(&self.ctx.two_a.mul(&bd));
        let odd = a.mul(d).add(&b.mul(c));
        SqrtExt::new(even, odd, &self.ctx)
    }

    /// `(a + bs)⁻¹ = (a − bs)/(a² − 2A·b²)`.
    pub fn inv(&self) -> Result<SqrtExt> {
        let norm = self.even.mul(&self.even).sub(&self.ctx.two_a.mul(&self.odd.mul(&self.odd)));
        let n = norm.inv()?;
        Ok(SqrtExt::new(self.even.mul(&n), self.odd.neg().mul(&n), &self.ctx))
    }

    /// The q-derivative; `frame` must be the q-frame.
    pub fn derive(&self, frame: &Frame) -> Result<SqrtExt> {
        if frame.kind != FrameKind::Q {
            return Err(KernelError::FrameMismatch("q".into(), frame.to_string()));
        }
        let zf = self.ctx.z_frame;
        let da = zf.derive(&self.even)?;
        let db = zf.derive(&self.odd)?;
        let even = self.ctx.two_a.mul(&db).add(&self.odd.mul(&self.ctx.a_prime));
        Ok(SqrtExt::new(even, da, &self.ctx))
    }

    pub fn latex(&self) -> String {
        match (self.even.is_zero(), self.odd.is_zero()) {
            (true, true) => "0".into(),
            (false, true) => self.even.latex(),
            (true, false) => format!("\\left({}\\right) z'", self.odd.latex()),
            (false, false) => format!("{} + \\left({}\\right) z'", self.even.latex(), self.odd.latex()),
        }
    }
}

impl PartialEq for SqrtExt {
    fn eq(&self, other: &Self) -> bool {
        self.even == other.even && self.odd == other.odd && self.ctx.two_a == other.ctx.two_a
    }
}

impl fmt::Display for SqrtExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.even.is_zero(), self.odd.is_zero()) {
            (_, true) => write!(f, "{}", self.even),
            (true, false) => write!(f, "({})·s", self.odd),
            (false, false) => write!(f, "{} + ({})·s", self.even, self.odd),
        }
    }
}

impl fmt::Debug for SqrtExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
