//! Linear ordinary differential operators `Σ c_k D^k` with scalar coefficients.
//!
//! Operators are stored expanded with trailing zero coefficients trimmed, so
//! equality is coefficientwise. A detached prefactor `s^m` keeps factors such
//! as `z′(q)³` exact: `s` is known only through its logarithmic derivative
//! `ℓ = s′/s` and its square, and composition moves it to the left using
//! `s⁻ⁿ D sⁿ = D + nℓ`.

use crate::diffalg::{Frame, Rde, Scalar};
use crate::error::{KernelError, Result};
use crate::transform::FrameTriple;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct Prefactor<S> {
    pub power: i32,
    /// `s′/s` in the operator's frame.
    pub log_derivative: S,
    /// `s²`, used to reduce pairs of `s`.
    pub square: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearDiffOperator<S: Scalar> {
    frame: Frame,
    coeffs: Vec<S>,
    prefactor: Option<Prefactor<S>>,
}

pub type Op = LinearDiffOperator<Rde>;

fn binomial(n: usize, k: usize) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

impl<S: Scalar> LinearDiffOperator<S> {
    /// `coeffs[k]` multiplies `D^k`.
    pub fn new(frame: Frame, coeffs: Vec<S>) -> Self {
        let mut op = LinearDiffOperator { frame, coeffs, prefactor: None };
        op.trim();
        op
    }

    pub fn zero(frame: Frame) -> Self {
        LinearDiffOperator { frame, coeffs: Vec::new(), prefactor: None }
    }

    /// Multiplication by `c`.
    pub fn scalar(frame: Frame, c: S) -> Self {
        Self::new(frame, vec![c])
    }

    /// `D + c`.
    pub fn first_order(frame: Frame, c: S) -> Self {
        let one = c.one_like();
        Self::new(frame, vec![c, one])
    }

    /// `D^k`; `template` fixes the scalar ring.
    pub fn d_pow(frame: Frame, k: usize, template: &S) -> Self {
        let mut coeffs = vec![template.zero_like(); k];
        coeffs.push(template.one_like());
        Self::new(frame, coeffs)
    }

    /// Composition of factors, leftmost first.
    pub fn from_factors(frame: Frame, factors: &[Self]) -> Result<Self> {
        let mut it = factors.iter();
        let Some(first) = it.next() else {
            return Err(KernelError::Invalid("empty factor list".into()));
        };
        let mut acc = first.clone();
        for f in it {
            acc = acc.compose(f)?;
        }
        debug_assert_eq!(acc.frame, frame);
        Ok(acc)
    }

    pub fn with_prefactor(mut self, power: i32, log_derivative: S, square: S) -> Self {
        self.prefactor = (power != 0).then_some(Prefactor { power, log_derivative, square });
        self
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.s_is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.prefactor = None;
        }
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn prefactor(&self) -> Option<&Prefactor<S>> {
        self.prefactor.as_ref()
    }

    pub fn scalar_power(&self) -> i32 {
        self.prefactor.as_ref().map_or(0, |p| p.power)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Option<&S> {
        self.coeffs.get(k)
    }

    /// Drops the prefactor record.
    pub fn bare(&self) -> Self {
        LinearDiffOperator { frame: self.frame, coeffs: self.coeffs.clone(), prefactor: None }
    }

    fn check_frame(&self, other: &Self) -> Result<()> {
        if self.frame != other.frame {
            return Err(KernelError::FrameMismatch(self.frame.to_string(), other.frame.to_string()));
        }
        Ok(())
    }

    fn check_prefactor(&self, other: &Self) -> Result<()> {
        if self.scalar_power() != other.scalar_power() {
            return Err(KernelError::Invalid("operators carry different detached prefactors".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        self.check_prefactor(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let t = &self.coeffs[0];
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.s_add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => t.zero_like(),
            })
            .collect();
        let mut op = LinearDiffOperator { frame: self.frame, coeffs, prefactor: self.prefactor.clone() };
        op.trim();
        Ok(op)
    }

    pub fn neg(&self) -> Self {
        LinearDiffOperator {
            frame: self.frame,
            coeffs: self.coeffs.iter().map(|c| c.s_neg()).collect(),
            prefactor: self.prefactor.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Left multiplication by a scalar.
    pub fn scale(&self, c: &S) -> Self {
        let mut op = LinearDiffOperator {
            frame: self.frame,
            coeffs: self.coeffs.iter().map(|x| c.s_mul(x)).collect(),
            prefactor: self.prefactor.clone(),
        };
        op.trim();
        op
    }

    /// Composition of the expanded parts by the generalized Leibniz rule.
    fn compose_bare(&self, other: &Self) -> Result<Vec<S>> {
        if self.is_zero() || other.is_zero() {
            return Ok(Vec::new());
        }
        let n = self.coeffs.len() - 1;
        let m = other.coeffs.len() - 1;
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; n + m + 1];
        // derivs[j][k] = k-th derivative of other.coeffs[j].
        let mut derivs: Vec<Vec<S>> = Vec::with_capacity(m + 1);
        for q in &other.coeffs {
            let mut row = vec![q.clone()];
            for _ in 0..n {
                if row.last().unwrap().s_is_zero() {
                    row.push(row.last().unwrap().clone());
                } else {
                    row.push(row.last().unwrap().s_derive(&self.frame)?);
                }
            }
            derivs.push(row);
        }
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.s_is_zero() {
                continue;
            }
            for (j, row) in derivs.iter().enumerate() {
                for (k, dq) in row.iter().enumerate().take(i + 1) {
                    if dq.s_is_zero() {
                        continue;
                    }
                    let c = binomial(i, k);
                    let term = p.s_mul(dq);
                    let term = if c == 1 { term } else { term.s_scale(c, 1) };
                    let slot = i - k + j;
                    out[slot] = out[slot].s_add(&term);
                }
            }
        }
        Ok(out)
    }

    /// `s⁻ⁿ·self·sⁿ`, which replaces `D` by `D + nℓ`.
    fn conjugate_by_power(&self, n: i32, log_derivative: &S) -> Result<Self> {
        if n == 0 || self.is_zero() {
            return Ok(self.bare());
        }
        let shift = log_derivative.s_scale(n as i64, 1);
        let step = Self::first_order(self.frame, shift);
        let mut power = Self::scalar(self.frame, self.coeffs[0].one_like());
        let mut acc = Self::scalar(self.frame, self.coeffs[0].clone());
        for c in self.coeffs.iter().skip(1) {
            power = LinearDiffOperator::new(self.frame, power.compose_bare(&step)?);
            acc = acc.add(&power.scale(c))?;
        }
        Ok(acc)
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.frame));
        }
        let ctx = match (&self.prefactor, &other.prefactor) {
            (Some(a), Some(b)) => {
                if a.square != b.square {
                    return Err(KernelError::Invalid("incompatible prefactor contexts".into()));
                }
                Some(a.clone())
            }
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        };
        let Some(ctx) = ctx else {
            return Ok(Self::new(self.frame, self.compose_bare(other)?));
        };
        let m = self.scalar_power();
        let n = other.scalar_power();
        let left = self.bare().conjugate_by_power(n, &ctx.log_derivative)?;
        let mut coeffs = left.compose_bare(&other.bare())?;
        let mut power = m + n;
        while power >= 2 {
            coeffs = coeffs.iter().map(|c| c.s_mul(&ctx.square)).collect();
            power -= 2;
        }
        if power <= -2 {
            let inv = ctx.square.s_inv()?;
            while power <= -2 {
                coeffs = coeffs.iter().map(|c| c.s_mul(&inv)).collect();
                power += 2;
            }
        }
        let op = Self::new(self.frame, coeffs);
        Ok(op.with_prefactor(power, ctx.log_derivative, ctx.square))
    }

    /// `Σ (−D)^k ∘ c_k`. A prefactor `s^m` moves back to the left by conjugation.
    pub fn transpose(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let t = &self.coeffs[0];
        let mut acc = Self::zero(self.frame);
        let minus_d = Self::new(self.frame, vec![t.zero_like(), t.int_like(-1)]);
        let mut power = Self::scalar(self.frame, t.one_like());
        for c in &self.coeffs {
            let term = LinearDiffOperator::new(self.frame, power.compose_bare(&Self::scalar(self.frame, c.clone()))?);
            acc = acc.add(&term)?;
            power = LinearDiffOperator::new(self.frame, power.compose_bare(&minus_d)?);
        }
        match &self.prefactor {
            None => Ok(acc),
            Some(p) => {
                // (sᵐP)ᵀ = Pᵀsᵐ = sᵐ(s⁻ᵐPᵀsᵐ).
                let conj = acc.conjugate_by_power(p.power, &p.log_derivative)?;
                Ok(conj.with_prefactor(p.power, p.log_derivative.clone(), p.square.clone()))
            }
        }
    }

    /// `Σ c_k D^k u`; the detached prefactor is not applied.
    pub fn apply(&self, u: &S) -> Result<S> {
        let mut acc = u.zero_like();
        let mut du = u.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                if du.s_is_zero() {
                    break;
                }
                du = du.s_derive(&self.frame)?;
            }
            if !c.s_is_zero() {
                acc = acc.s_add(&c.s_mul(&du));
            }
        }
        Ok(acc)
    }

    /// Coefficientwise map, keeping the frame.
    pub fn map_coeffs(&self, f: impl Fn(&S) -> Result<S>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        let mut op = LinearDiffOperator { frame: self.frame, coeffs, prefactor: self.prefactor.clone() };
        op.trim();
        Ok(op)
    }

    /// Re-expresses the operator in another frame with the same coefficients.
    pub fn in_frame(&self, frame: Frame) -> Self {
        LinearDiffOperator { frame, coeffs: self.coeffs.clone(), prefactor: self.prefactor.clone() }
    }

    /// True when all coefficients of `D^k` with `k ≥ 1` vanish.
    pub fn is_multiplication(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn total_size(&self) -> usize {
        self.coeffs.iter().map(|c| c.size()).sum()
    }

    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.s_is_zero() {
                continue;
            }
            let d = match k {
                0 => String::new(),
                1 => "D".into(),
                _ => format!("D^{{{k}}}"),
            };
            let cl = c.to_latex();
            parts.push(match (cl.as_str(), k) {
                ("1", 0) => "1".into(),
                ("1", _) => d,
                ("-1", 0) => "-1".into(),
                ("-1", _) => format!("-{d}"),
                (_, 0) => cl,
                _ => format!("\\left({cl}\\right) {d}"),
            });
        }
        let body = parts.join(" + ").replace("+ -", "- ");
        match self.scalar_power() {
            0 => body,
            1 => format!("s \\left[{body}\\right]"),
            m => format!("s^{{{m}}} \\left[{body}\\right]"),
        }
    }
}

impl<S: Scalar> fmt::Display for LinearDiffOperator<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        match self.scalar_power() {
            0 => {}
            1 => write!(f, "s·[")?,
            m => write!(f, "s^{m}·[")?,
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.s_is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let d = match k {
                0 => String::new(),
                1 => "D".into(),
                _ => format!("D^{k}"),
            };
            let cs = c.to_string();
            match (cs.as_str(), k) {
                ("1", 0) => write!(f, "1")?,
                ("1", _) => write!(f, "{d}")?,
                (_, 0) => write!(f, "({cs})")?,
                _ => write!(f, "({cs})·{d}")?,
            }
        }
        if self.scalar_power() != 0 {
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl Op {
    /// `D` in `frame`.
    pub fn derivation(frame: Frame) -> Op {
        Op::d_pow(frame, 1, &Rde::zero())
    }

    pub fn rde_scalar(frame: Frame, c: Rde) -> Op {
        Op::scalar(frame, c)
    }
}

/// `φ₁ · P|_{z=φ₂/φ₁, f=φ₃/φ₁} · φ₁⁻¹` with `d/dz = (dz/dw)⁻¹ d/dw`.
///
/// `p` lives in the z-frame without a detached prefactor; the result lives in
/// the frame of `triple`.
pub fn pullback(p: &Op, triple: &FrameTriple) -> Result<Op> {
    if p.prefactor().is_some() {
        return Err(KernelError::Invalid("pullback expects an operator without a detached prefactor".into()));
    }
    let wf = triple.frame();
    if p.is_zero() {
        return Ok(Op::zero(wf));
    }
    let order = p.order().unwrap();
    let chain = triple.chain_jets(order + p.coeffs().iter().map(max_f_order).max().unwrap_or(0))?;
    let z_of_w = triple.z_of_w();
    let subst = |c: &Rde| -> Result<Rde> {
        c.substitute(&|v| {
            if v == crate::diffalg::Var::z() {
                return Some(z_of_w.clone());
            }
            match v.as_jet() {
                Some((crate::diffalg::Func::F, k)) => chain.get(k as usize).cloned(),
                _ => None,
            }
        })
    };
    let dz = triple.dz_dw()?;
    let dz_op = Op::new(wf, vec![Rde::zero(), dz.inv()?]);
    let mut power = Op::scalar(wf, Rde::one());
    let mut acc = Op::zero(wf);
    for (k, c) in p.coeffs().iter().enumerate() {
        if k > 0 {
            power = power.compose(&dz_op)?;
        }
        if !c.is_zero() {
            acc = acc.add(&power.scale(&subst(c)?))?;
        }
    }
    let phi1 = triple.phi(1).clone();
    Op::scalar(wf, phi1.clone()).compose(&acc)?.compose(&Op::scalar(wf, phi1.inv()?))
}

fn max_f_order(c: &Rde) -> usize {
    c.vars()
        .iter()
        .filter_map(|v| match v.as_jet() {
            Some((crate::diffalg::Func::F, k)) => Some(k as usize),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}
