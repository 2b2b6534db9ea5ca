//! Change of frame: `z = φ₂/φ₁`, `f = φ₃/φ₁` for a triple `(φ₁, φ₂, φ₃)` of
//! functions of `w`, with the Wronskian calculus that expresses every z-space
//! object in terms of `w`.

use crate::diffalg::{Frame, FrameKind, Func, Rde, Var};
use crate::error::{KernelError, Result};
use crate::matrix::Matrix;
use crate::operators::Op;
use crate::typeb::OmegaMatrix;

/// `(φ₁, φ₂, φ₃)` with the first three derivatives of each component.
#[derive(Clone, Debug)]
pub struct FrameTriple {
    frame: Frame,
    /// `jets[i][k]` is the k-th derivative of φᵢ₊₁.
    jets: [[Rde; 4]; 3],
}

/// The six derivative conversions from `z = φ₂/φ₁` and `f = φ₃/φ₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeConversions {
    pub dz: Rde,
    pub d2z: Rde,
    pub d3z: Rde,
    pub df: Rde,
    pub d2f: Rde,
    pub d3f: Rde,
}

/// `f′(z), f″(z), f‴(z)` and `zf′ − f` as functions of `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainQuantities {
    pub fp: Rde,
    pub fpp: Rde,
    pub fppp: Rde,
    pub zfp_minus_f: Rde,
}

/// The column vectors used by the matrix forms of `A`, `B`, `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureVectors {
    /// `(zf′ − f, −f′, 1)` in the z-frame.
    pub xi: [Rde; 3],
    /// `(z, −1, 0)` in the z-frame.
    pub zeta0: [Rde; 3],
    /// `(φ₂, −φ₁, 0)`.
    pub zeta: [Rde; 3],
    /// `(W₃,₂, −W₃,₁, W₂,₁)`.
    pub wvec: [Rde; 3],
    pub wvec_prime: [Rde; 3],
    /// `(W₃′,₂′, −W₃′,₁′, W₂′,₁′)`.
    pub wvec_pp: [Rde; 3],
}

/// `A`, `B`, `C` of the gauged Hamiltonian `−A D² − B D − C`.
#[derive(Clone, Debug, PartialEq)]
pub struct Abc {
    pub a: Rde,
    pub b: Rde,
    pub c: Rde,
}

impl Abc {
    /// `Q = B + A′/2`.
    pub fn q(&self, frame: &Frame) -> Result<Rde> {
        Ok(self.b.add(&frame.derive(&self.a)?.mul(&Rde::ratio(1, 2))))
    }

    /// `A·f″` with `f″` the second jet of `f` in the same frame.
    pub fn a_times_f2(&self) -> Rde {
        self.a.mul(&Rde::var(Var::f(2)))
    }
}

/// Where a matrix form is evaluated.
#[derive(Clone, Copy, Debug)]
pub enum Location<'a> {
    Z,
    Frame(&'a FrameTriple),
}

impl FrameTriple {
    /// Validates that `W₂,₁` and `W₃₁,₂₁` do not vanish identically.
    pub fn new(frame: Frame, phi: [Rde; 3]) -> Result<FrameTriple> {
        let mut jets: Vec<[Rde; 4]> = Vec::with_capacity(3);
        for p in phi {
            let d1 = frame.derive(&p)?;
            let d2 = frame.derive(&d1)?;
            let d3 = frame.derive(&d2)?;
            jets.push([p, d1, d2, d3]);
        }
        let jets: [[Rde; 4]; 3] = jets.try_into().expect("three components");
        let t = FrameTriple { frame, jets };
        if t.wron(2, 1).is_zero() {
            return Err(KernelError::Degenerate(format!("W₂,₁ ≡ 0 for frame ({}, {}, {})", t.phi(1), t.phi(2), t.phi(3))));
        }
        if t.w31_21()?.is_zero() {
            return Err(KernelError::Degenerate(format!(
                "W₃₁,₂₁ ≡ 0 for frame ({}, {}, {})",
                t.phi(1),
                t.phi(2),
                t.phi(3)
            )));
        }
        Ok(t)
    }

    /// `(1, w, f(w))`.
    pub fn identity(max_order: u8) -> Result<FrameTriple> {
        FrameTriple::new(
            Frame::w().with_max_order(max_order),
            [Rde::one(), Rde::var(Var::w()), Rde::var(Var::f(0))],
        )
    }

    /// Fully formal components `φ₁, φ₂, φ₃`.
    pub fn formal(max_order: u8) -> Result<FrameTriple> {
        FrameTriple::new(
            Frame::w().with_max_order(max_order),
            [1, 2, 3].map(|i| Rde::var(Var::jet(Func::Phi(i), 0))),
        )
    }

    /// `φᵢ = Σⱼ Λᵢⱼ·(1, w, f(w))ⱼ`.
    pub fn linear(lambda: &Matrix, max_order: u8) -> Result<FrameTriple> {
        let basis = [Rde::one(), Rde::var(Var::w()), Rde::var(Var::f(0))];
        let phi = lambda.mul_vec(&basis);
        FrameTriple::new(Frame::w().with_max_order(max_order), phi.try_into().expect("three components"))
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    /// φᵢ, 1-based.
    pub fn phi(&self, i: usize) -> &Rde {
        &self.jets[i - 1][0]
    }

    /// k-th derivative of φᵢ for k ≤ 3.
    pub fn dphi(&self, i: usize, k: usize) -> &Rde {
        &self.jets[i - 1][k]
    }

    pub fn phis(&self) -> [Rde; 3] {
        [1, 2, 3].map(|i| self.phi(i).clone())
    }

    pub fn derive(&self, x: &Rde) -> Result<Rde> {
        self.frame.derive(x)
    }

    /// `W_{i,j} = φᵢ′φⱼ − φᵢφⱼ′`.
    pub fn wron(&self, i: usize, j: usize) -> Rde {
        self.dphi(i, 1).mul(self.phi(j)).sub(&self.phi(i).mul(self.dphi(j, 1)))
    }

    /// `W_{i′,j′} = φᵢ″φⱼ′ − φᵢ′φⱼ″`.
    pub fn wron_primed(&self, i: usize, j: usize) -> Rde {
        self.dphi(i, 2).mul(self.dphi(j, 1)).sub(&self.dphi(i, 1).mul(self.dphi(j, 2)))
    }

    /// `W_{ij,kl} = W′_{i,j}W_{k,l} − W_{i,j}W′_{k,l}`.
    pub fn wron_nested(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> Result<Rde> {
        let a = self.wron(i, j);
        let b = self.wron(k, l);
        Ok(self.derive(&a)?.mul(&b).sub(&a.mul(&self.derive(&b)?)))
    }

    pub fn w31_21(&self) -> Result<Rde> {
        self.wron_nested((3, 1), (2, 1))
    }

    /// Logarithmic derivative `x′/x`.
    pub fn log_derivative(&self, x: &Rde) -> Result<Rde> {
        self.derive(x)?.div(x)
    }

    pub fn z_of_w(&self) -> Rde {
        self.phi(2).div(self.phi(1)).expect("φ₁ ≢ 0")
    }

    pub fn f_of_w(&self) -> Rde {
        self.phi(3).div(self.phi(1)).expect("φ₁ ≢ 0")
    }

    /// `dz/dw = W₂,₁/φ₁²`.
    pub fn dz_dw(&self) -> Result<Rde> {
        self.wron(2, 1).div(&self.phi(1).pow(2))
    }

    fn conversions_for(&self, w: &Rde) -> Result<[Rde; 3]> {
        let p = self.phi(1);
        let (p1, p2) = (self.dphi(1, 1), self.dphi(1, 2));
        let w1 = self.derive(w)?;
        let w2 = self.derive(&w1)?;
        let d1 = w.div(&p.pow(2))?;
        let d2 = w1.div(&p.pow(2))?.sub(&w.mul(p1).scale(2).div(&p.pow(3))?);
        let d3 = w2
            .div(&p.pow(2))?
            .sub(&w1.mul(p1).scale(4).add(&w.mul(p2).scale(2)).div(&p.pow(3))?)
            .add(&w.mul(&p1.pow(2)).scale(6).div(&p.pow(4))?);
        Ok([d1, d2, d3])
    }

    /// Closed forms for the first three w-derivatives of `z` and `f`.
    pub fn derivative_conversions(&self) -> Result<DerivativeConversions> {
        let [dz, d2z, d3z] = self.conversions_for(&self.wron(2, 1))?;
        let [df, d2f, d3f] = self.conversions_for(&self.wron(3, 1))?;
        Ok(DerivativeConversions { dz, d2z, d3z, df, d2f, d3f })
    }

    /// Closed forms for `f′(z)`, `f″(z)`, `f‴(z)` and `zf′ − f`.
    pub fn chain_quantities(&self) -> Result<ChainQuantities> {
        let w21 = self.wron(2, 1);
        let w21p = self.derive(&w21)?;
        let n = self.w31_21()?;
        let np = self.derive(&n)?;
        let p = self.phi(1);
        let p1 = self.dphi(1, 1);
        let fp = self.wron(3, 1).div(&w21)?;
        let fpp = n.mul(&p.pow(2)).div(&w21.pow(3))?;
        let fppp = np
            .mul(p)
            .add(&n.mul(p1).scale(2))
            .mul(&p.pow(3))
            .div(&w21.pow(4))?
            .sub(&n.mul(&w21p).mul(&p.pow(4)).scale(3).div(&w21.pow(5))?);
        let zfp_minus_f = self.wron(3, 2).div(&w21)?;
        Ok(ChainQuantities { fp, fpp, fppp, zfp_minus_f })
    }

    /// `f⁽ᵏ⁾(z)` as functions of `w` for `k ≤ n`, by repeated `(dz/dw)⁻¹ d/dw`.
    pub fn chain_jets(&self, n: usize) -> Result<Vec<Rde>> {
        let inv_dz = self.dz_dw()?.inv()?;
        let mut out = vec![self.f_of_w()];
        for _ in 0..n {
            let next = self.derive(out.last().unwrap())?.mul(&inv_dz);
            out.push(next);
        }
        Ok(out)
    }

    /// Rewrites a z-frame expression as a function of `w`.
    pub fn to_w(&self, x: &Rde) -> Result<Rde> {
        let max_k = x
            .vars()
            .iter()
            .filter_map(|v| match v.as_jet() {
                Some((Func::F, k)) => Some(k as usize),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let chain = self.chain_jets(max_k)?;
        let z = self.z_of_w();
        x.substitute(&|v| {
            if v == Var::z() {
                return Some(z.clone());
            }
            match v.as_jet() {
                Some((Func::F, k)) => Some(chain[k as usize].clone()),
                _ => None,
            }
        })
    }

    pub fn structure_vectors(&self) -> Result<StructureVectors> {
        let z = Rde::var(Var::z());
        let (f0, f1) = (Rde::var(Var::f(0)), Rde::var(Var::f(1)));
        let wvec = [self.wron(3, 2), self.wron(3, 1).neg(), self.wron(2, 1)];
        let wvec_prime = [self.derive(&wvec[0])?, self.derive(&wvec[1])?, self.derive(&wvec[2])?];
        Ok(StructureVectors {
            xi: [z.mul(&f1).sub(&f0), f1.neg(), Rde::one()],
            zeta0: [z, Rde::int(-1), Rde::zero()],
            zeta: [self.phi(2).clone(), self.phi(1).neg(), Rde::zero()],
            wvec,
            wvec_prime,
            wvec_pp: [self.wron_primed(3, 2), self.wron_primed(3, 1).neg(), self.wron_primed(2, 1)],
        })
    }

    /// Bracket `W₂,₁′/W₂,₁ − 2φ₁′/φ₁`; the new `Ê` is `E` minus this times `w′`.
    pub fn e_shift(&self) -> Result<Rde> {
        let lw = self.log_derivative(&self.wron(2, 1))?;
        let lp = self.log_derivative(self.phi(1))?;
        Ok(lw.sub(&lp.scale(2)))
    }

    /// Bracket `W₃₁,₂₁′/W₃₁,₂₁ − 3W₂,₁′/W₂,₁ + 2φ₁′/φ₁`; `F` is this times `w′`.
    pub fn f_bracket(&self) -> Result<Rde> {
        let ln = self.log_derivative(&self.w31_21()?)?;
        let lw = self.log_derivative(&self.wron(2, 1))?;
        let lp = self.log_derivative(self.phi(1))?;
        Ok(ln.sub(&lw.scale(3)).add(&lp.scale(2)))
    }

    /// Bracket `W₂,₁′/W₂,₁ − φ₁′/φ₁`; `Ŵ` is `W` plus this times `w′`.
    pub fn w_shift(&self) -> Result<Rde> {
        let lw = self.log_derivative(&self.wron(2, 1))?;
        let lp = self.log_derivative(self.phi(1))?;
        Ok(lw.sub(&lp))
    }

    /// `(E-shift, F-bracket)`.
    pub fn ef_in_new_frame(&self) -> Result<(Rde, Rde)> {
        Ok((self.e_shift()?, self.f_bracket()?))
    }

    fn speed_prefactor(&self, op: Op, power: i32, square: Option<&Rde>) -> Result<Op> {
        let sq = square.cloned().unwrap_or_else(|| Rde::var(Var::jet(Func::Speed, 0)));
        let ld = self.derive(&sq)?.div(&sq.scale(2))?;
        Ok(op.with_prefactor(power, ld, sq))
    }

    /// `w′³(D + ℓ₁ + ℓ_W − ℓ_N)(D + ℓ₁ − ℓ_W)(D − ℓ₁)` with `ℓ₁ = φ₁′/φ₁`,
    /// `ℓ_W = W₂,₁′/W₂,₁`, `ℓ_N = W₃₁,₂₁′/W₃₁,₂₁`. `square` is `w′²` as a
    /// function of `w`; a formal `σ` is used when it is not given.
    pub fn transformed_supercharge_minus(&self, square: Option<&Rde>) -> Result<Op> {
        let (l1, lw, ln) = self.log_terms()?;
        let fr = self.frame;
        let op = Op::from_factors(
            fr,
            &[
                Op::first_order(fr, l1.add(&lw).sub(&ln)),
                Op::first_order(fr, l1.sub(&lw)),
                Op::first_order(fr, l1.neg()),
            ],
        )?;
        self.speed_prefactor(op, 3, square)
    }

    /// `−w′³(D + ℓ₁)(D − ℓ₁ + ℓ_W)(D − ℓ₁ − ℓ_W + ℓ_N)`.
    pub fn transformed_supercharge_plus(&self, square: Option<&Rde>) -> Result<Op> {
        let (l1, lw, ln) = self.log_terms()?;
        let fr = self.frame;
        let op = Op::from_factors(
            fr,
            &[
                Op::first_order(fr, l1.clone()),
                Op::first_order(fr, lw.sub(&l1)),
                Op::first_order(fr, ln.sub(&l1).sub(&lw)),
            ],
        )?
        .neg();
        self.speed_prefactor(op, 3, square)
    }

    fn log_terms(&self) -> Result<(Rde, Rde, Rde)> {
        Ok((
            self.log_derivative(self.phi(1))?,
            self.log_derivative(&self.wron(2, 1))?,
            self.log_derivative(&self.w31_21()?)?,
        ))
    }

    /// `(φ₁/W₃₁,₂₁)·(W₂,₁, W₃,₁, W₃,₂)`, the kernel of the transformed `P̄⁺`.
    pub fn plus_sector(&self) -> Result<[Rde; 3]> {
        let pref = self.phi(1).div(&self.w31_21()?)?;
        Ok([self.wron(2, 1), self.wron(3, 1), self.wron(3, 2)].map(|x| x.mul(&pref)))
    }
}

/// The gauged coefficients in matrix form.
///
/// In the z-frame: `A f″ = ξᵀΩφ₀`, `B = −ζ₀ᵀΩφ₀`, `C = ζ₀′ᵀΩφ₀`. For a frame:
/// `Â = (φ₁/W₃₁,₂₁)𝐖ᵀΩφ`, `B̂ = −(φ₁/W₃₁,₂₁)𝐖′ᵀΩφ`, `Ĉ = (φ₁/W₃₁,₂₁)𝐖″ᵀΩφ`.
pub fn matrix_form_abc(omega: &OmegaMatrix, at: Location<'_>) -> Result<Abc> {
    let m = omega.matrix();
    match at {
        Location::Z => {
            let z = Rde::var(Var::z());
            let (f0, f1, f2) = (Rde::var(Var::f(0)), Rde::var(Var::f(1)), Rde::var(Var::f(2)));
            let phi0 = [Rde::one(), z.clone(), f0.clone()];
            let xi = [z.mul(&f1).sub(&f0), f1.neg(), Rde::one()];
            let zeta0 = [z, Rde::int(-1), Rde::zero()];
            let zeta0p = [Rde::one(), Rde::zero(), Rde::zero()];
            let af2 = m.bilinear(&xi, &phi0);
            Ok(Abc { a: af2.div(&f2)?, b: m.bilinear(&zeta0, &phi0).neg(), c: m.bilinear(&zeta0p, &phi0) })
        }
        Location::Frame(t) => {
            let sv = t.structure_vectors()?;
            let phi = t.phis();
            let pref = t.phi(1).div(&t.w31_21()?)?;
            Ok(Abc {
                a: m.bilinear(&sv.wvec, &phi).mul(&pref),
                b: m.bilinear(&sv.wvec_prime, &phi).mul(&pref).neg(),
                c: m.bilinear(&sv.wvec_pp, &phi).mul(&pref),
            })
        }
    }
}

/// The scalar expansions of `A f″`, `B`, `C` directly in terms of the entries.
pub fn abc_expanded(omega: &OmegaMatrix) -> Result<Abc> {
    let z = Rde::var(Var::z());
    let (f0, f1, f2) = (Rde::var(Var::f(0)), Rde::var(Var::f(1)), Rde::var(Var::f(2)));
    let (a, b, c) = (|i| omega.a(i).clone(), |i| omega.b(i).clone(), |i| omega.c(i).clone());
    let z2 = z.mul(&z);
    // Af″ = [(c₂z − b₂)f + c₁z² + (c₀ − b₁)z − b₀]f′ − [c₂f + c₁z + c₀ − a₂]f + a₁z + a₀
    let bracket1 = c(2)
        .mul(&z)
        .sub(&b(2))
        .mul(&f0)
        .add(&c(1).mul(&z2))
        .add(&c(0).sub(&b(1)).mul(&z))
        .sub(&b(0));
    let bracket2 = c(2).mul(&f0).add(&c(1).mul(&z)).add(&c(0)).sub(&a(2));
    let af2 = bracket1.mul(&f1).sub(&bracket2.mul(&f0)).add(&a(1).mul(&z)).add(&a(0));
    // B = −(c₂z − b₂)f − c₁z² − (c₀ − b₁)z + b₀
    let bb = c(2)
        .mul(&z)
        .sub(&b(2))
        .mul(&f0)
        .neg()
        .sub(&c(1).mul(&z2))
        .sub(&c(0).sub(&b(1)).mul(&z))
        .add(&b(0));
    // C = c₂f + c₁z + c₀
    let cc = c(2).mul(&f0).add(&c(1).mul(&z)).add(&c(0));
    Ok(Abc { a: af2.div(&f2)?, b: bb, c: cc })
}

/// `Â, B̂, Ĉ, Q̂` from `A, B, C, Q` by the Wronskian transformation rule.
pub fn transform_abcq(abc: &Abc, q: &Rde, t: &FrameTriple) -> Result<(Abc, Rde)> {
    let a = t.to_w(&abc.a)?;
    let b = t.to_w(&abc.b)?;
    let c = t.to_w(&abc.c)?;
    let q = t.to_w(q)?;
    let w21 = t.wron(2, 1);
    let w21p = t.derive(&w21)?;
    let p = t.phi(1);
    let p1 = t.dphi(1, 1);
    let p4 = p.pow(4);
    let a_hat = a.mul(&p4).div(&w21.pow(2))?;
    let b_hat = b.mul(&p.pow(2)).div(&w21)?.sub(&a.mul(&w21p).mul(&p4).div(&w21.pow(3))?);
    let c_hat = c
        .sub(&b.mul(p).mul(p1).div(&w21)?)
        .add(&a.mul(&t.wron_primed(2, 1)).mul(&p4).div(&w21.pow(3))?);
    let shift = t.w_shift()?;
    let q_hat = q.mul(&p.pow(2)).div(&w21)?.sub(&a.scale(2).mul(&shift).mul(&p4).div(&w21.pow(2))?);
    Ok((Abc { a: a_hat, b: b_hat, c: c_hat }, q_hat))
}

/// Replaces the w-frame variables `w`, `f⁽ᵏ⁾(w)` by their z-frame namesakes.
pub fn rename_w_to_z(x: &Rde) -> Rde {
    x.rename(|v| if v == Var::w() { Var::z() } else { v })
}

/// Rewrites an operator in `w` as one in `z` by renaming the base variable.
pub fn op_w_to_z(op: &Op, max_order: u8) -> Result<Op> {
    if op.frame().kind != FrameKind::W {
        return Err(KernelError::Invalid("expected a w-frame operator".into()));
    }
    op.in_frame(Frame::z().with_max_order(max_order)).map_coeffs(|c| Ok(rename_w_to_z(c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Rde {
        Rde::var(Var::w())
    }
    fn f(k: u8) -> Rde {
        Rde::var(Var::f(k))
    }

    #[test]
    fn identity_frame_basics() {
        let t = FrameTriple::identity(6).unwrap();
        let dc = t.derivative_conversions().unwrap();
        assert!(dc.dz.is_one());
        assert_eq!(dc.d2f, f(2));
        let cq = t.chain_quantities().unwrap();
        assert_eq!(cq.fp, f(1));
        assert_eq!(cq.fpp, f(2));
        assert_eq!(cq.zfp_minus_f, w().mul(&f(1)).sub(&f(0)));
        let (e, fb) = t.ef_in_new_frame().unwrap();
        assert!(e.is_zero());
        assert_eq!(fb, f(3).div(&f(2)).unwrap());
    }

    #[test]
    fn quadratic_frame_has_zero_f_bracket() {
        let t = FrameTriple::new(Frame::w(), [Rde::one(), w(), w().mul(&w())]).unwrap();
        assert!(t.f_bracket().unwrap().is_zero());
    }

    #[test]
    fn degenerate_frame_rejected() {
        let err = FrameTriple::new(Frame::w(), [Rde::one(), Rde::int(2), f(0)]).unwrap_err();
        assert!(err.to_string().contains("W₂,₁"));
    }

    #[test]
    fn identity_supercharges() {
        let t = FrameTriple::identity(6).unwrap();
        let fr = t.frame();
        let r = f(3).div(&f(2)).unwrap();
        let minus = Op::first_order(fr, r.neg()).compose(&Op::d_pow(fr, 2, &Rde::zero())).unwrap();
        assert_eq!(t.transformed_supercharge_minus(None).unwrap().bare(), minus);
        let plus = Op::d_pow(fr, 2, &Rde::zero()).compose(&Op::first_order(fr, r)).unwrap().neg();
        assert_eq!(t.transformed_supercharge_plus(None).unwrap().bare(), plus);
        assert_eq!(t.transformed_supercharge_plus(None).unwrap().scalar_power(), 3);
    }

    #[test]
    fn single_entry_matrix_forms() {
        let mut om = OmegaMatrix::zero();
        assert_eq!(matrix_form_abc(&om, Location::Z).unwrap(), Abc { a: Rde::zero(), b: Rde::zero(), c: Rde::zero() });
        om = OmegaMatrix::from_ints([[0, 0, 1], [0, 0, 0], [0, 0, 0]]);
        let abc = matrix_form_abc(&om, Location::Z).unwrap();
        let z = Rde::var(Var::z());
        assert_eq!(abc.a_times_f2(), z.mul(&f(0)).mul(&f(1)).sub(&f(0).mul(&f(0))));
        assert_eq!(abc.b, z.mul(&f(0)).neg());
        assert_eq!(abc.c, f(0));
        let om = OmegaMatrix::from_ints([[0, 0, 0], [0, 0, 0], [1, 0, 0]]);
        let abc = matrix_form_abc(&om, Location::Z).unwrap();
        assert!(abc.a_times_f2().is_one() && abc.b.is_zero() && abc.c.is_zero());
    }
}
