//! Type B 3-fold systems: from the parameter matrix Ω to the gauged
//! Hamiltonian, the supercharges, their sectors, and the q-space functions
//! `E`, `W`, `F` with the conditions and invariants built from them.

use crate::diffalg::{Frame, Func, Rde, Scalar, SqrtCtx, SqrtExt, Var};
use crate::error::{KernelError, Result};
use crate::matrix::Matrix;
use crate::operators::{LinearDiffOperator, Op};
use crate::report::VerificationCheck;
use crate::transform::{matrix_form_abc, Abc, FrameTriple, Location};
use std::time::Instant;

/// Rows `(c₀ c₁ c₂ / b₀ b₁ b₂ / a₀ a₁ a₂)`. Ω may be singular.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaMatrix(Matrix);

impl OmegaMatrix {
    pub fn new(m: Matrix) -> Result<OmegaMatrix> {
        if m.size() != 3 {
            return Err(KernelError::Invalid(format!("Ω must be 3×3, got {}×{}", m.size(), m.size())));
        }
        Ok(OmegaMatrix(m))
    }

    pub fn from_ints(rows: [[i64; 3]; 3]) -> OmegaMatrix {
        OmegaMatrix(Matrix::from_ints(&rows.map(|r| r.to_vec())))
    }

    pub fn zero() -> OmegaMatrix {
        OmegaMatrix(Matrix::zero(3))
    }

    pub fn identity() -> OmegaMatrix {
        OmegaMatrix(Matrix::identity(3))
    }

    /// Nine independent symbols `Ω_rc`.
    pub fn symbolic() -> OmegaMatrix {
        OmegaMatrix(Matrix::symbolic(3, |r, c| Var::omega(r as u8, c as u8)))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn c(&self, i: usize) -> &Rde {
        self.0.get(0, i)
    }

    pub fn b(&self, i: usize) -> &Rde {
        self.0.get(1, i)
    }

    pub fn a(&self, i: usize) -> &Rde {
        self.0.get(2, i)
    }
}

/// The function `f(z)`: a formal jet or a concrete rational function of `z`.
#[derive(Clone, Debug, PartialEq)]
pub enum FSpec {
    Formal,
    Concrete(Rde),
}

impl FSpec {
    /// Replaces the jets of `f` by derivatives of the concrete function.
    pub fn specialize(&self, x: &Rde) -> Result<Rde> {
        match self {
            FSpec::Formal => Ok(x.clone()),
            FSpec::Concrete(t) => x.substitute_f(t, &Frame::z()),
        }
    }

    pub fn jet(&self, k: u8) -> Result<Rde> {
        self.specialize(&Rde::var(Var::f(k)))
    }

    pub fn is_formal(&self) -> bool {
        matches!(self, FSpec::Formal)
    }
}

/// A constructed system in the gauged z-space.
#[derive(Clone, Debug)]
pub struct TypeBSystem {
    pub omega: OmegaMatrix,
    pub fspec: FSpec,
    pub frame: Frame,
    /// `ξᵀΩφ₀ = A f″`.
    pub a_f2: Rde,
    pub a: Rde,
    pub b: Rde,
    pub c: Rde,
    pub q: Rde,
    /// `−A D² − B D − C`.
    pub h_minus: Op,
    /// `s³ (D − f‴/f″) D²` with `s = z′`, `s² = 2A`.
    pub p3_minus: Op,
    /// `−s³ D² (D + f‴/f″)`.
    pub p3_plus_bar: Op,
    /// `⟨1, z, f⟩`.
    pub sector_minus: [Rde; 3],
    /// `(1/f″)⟨1, f′, zf′ − f⟩`.
    pub sector_plus: [Rde; 3],
}

impl TypeBSystem {
    pub fn build(omega: OmegaMatrix, fspec: FSpec, max_order: u8) -> Result<TypeBSystem> {
        let frame = Frame::z().with_max_order(max_order);
        let f0 = fspec.jet(0)?;
        let f1 = fspec.jet(1)?;
        let f2 = fspec.jet(2)?;
        let f3 = fspec.jet(3)?;
        if f2.is_zero() {
            return Err(KernelError::Degenerate(format!("f″ ≡ 0 for f = {f0}")));
        }
        let formal = matrix_form_abc(&omega, Location::Z)?;
        let a_f2 = fspec.specialize(&formal.a_times_f2())?;
        let a = a_f2.div(&f2)?;
        let b = fspec.specialize(&formal.b)?;
        let c = fspec.specialize(&formal.c)?;
        let q = b.add(&frame.derive(&a)?.mul(&Rde::ratio(1, 2)));
        let h_minus = Op::new(frame, vec![c.neg(), b.neg(), a.neg()]);
        let ratio = f3.div(&f2)?;
        let (ld, square) = speed_context(&a, &frame)?;
        let d2 = Op::d_pow(frame, 2, &Rde::zero());
        let p3_minus =
            Op::first_order(frame, ratio.neg()).compose(&d2)?.with_prefactor(3, ld.clone(), square.clone());
        let p3_plus_bar =
            d2.compose(&Op::first_order(frame, ratio.clone()))?.neg().with_prefactor(3, ld, square);
        let z = Rde::var(Var::z());
        let inv_f2 = f2.inv()?;
        let sector_minus = [Rde::one(), z.clone(), f0.clone()];
        let sector_plus = [inv_f2.clone(), f1.mul(&inv_f2), z.mul(&f1).sub(&f0).mul(&inv_f2)];
        Ok(TypeBSystem {
            omega,
            fspec,
            frame,
            a_f2,
            a,
            b,
            c,
            q,
            h_minus,
            p3_minus,
            p3_plus_bar,
            sector_minus,
            sector_plus,
        })
    }

    pub fn abc(&self) -> Abc {
        Abc { a: self.a.clone(), b: self.b.clone(), c: self.c.clone() }
    }

    /// The same system with `A` replaced by `A + delta`; a negative-control fixture.
    pub fn with_perturbed_a(&self, delta: &Rde) -> Result<TypeBSystem> {
        let mut s = self.clone();
        s.a = self.a.add(delta);
        s.a_f2 = s.a.mul(&self.fspec.jet(2)?);
        s.q = s.b.add(&self.frame.derive(&s.a)?.mul(&Rde::ratio(1, 2)));
        s.h_minus = Op::new(self.frame, vec![s.c.neg(), s.b.neg(), s.a.neg()]);
        Ok(s)
    }

    /// `(Ωφ)ᵢ` for `φ = (1, z, f)`.
    pub fn omega_on_sector(&self) -> Vec<Rde> {
        self.omega.matrix().mul_vec(&self.sector_minus)
    }

    /// `H̃⁻φᵢ + (Ωφ)ᵢ` for each basis function.
    pub fn preservation_residuals(&self) -> Result<Vec<Rde>> {
        let om = self.omega_on_sector();
        self.sector_minus.iter().zip(&om).map(|(p, o)| Ok(self.h_minus.apply(p)?.add(o))).collect()
    }

    pub fn verify_preservation(&self) -> VerificationCheck {
        let start = Instant::now();
        match self.preservation_residuals() {
            Ok(r) => VerificationCheck::from_residuals("preservation", &r, start),
            Err(e) => VerificationCheck::errored("preservation", &e, start),
        }
    }

    /// `P̃₃⁻` on `⟨1, z, f⟩` and `P̄₃⁺` on its partner sector.
    pub fn kernel_residuals(&self) -> Result<Vec<Rde>> {
        let mut out = Vec::with_capacity(6);
        for p in &self.sector_minus {
            out.push(self.p3_minus.apply(p)?);
        }
        for p in &self.sector_plus {
            out.push(self.p3_plus_bar.apply(p)?);
        }
        Ok(out)
    }

    pub fn verify_kernels(&self) -> VerificationCheck {
        let start = Instant::now();
        match self.kernel_residuals() {
            Ok(r) => VerificationCheck::from_residuals("sector-kernels", &r, start),
            Err(e) => VerificationCheck::errored("sector-kernels", &e, start),
        }
    }

    /// `E = A′s/(2A)`, `F = f‴s/f″`, `W = −Qs/(2A)` in the extension `s² = 2A`.
    pub fn qspace_functions(&self) -> Result<QSpaceFunctions<SqrtExt>> {
        let ctx = SqrtCtx::new(&self.a, self.frame.max_order)?;
        let two_a = self.a.scale(2);
        let e = ctx.a_prime().div(&two_a)?;
        let f = self.fspec.jet(3)?.div(&self.fspec.jet(2)?)?;
        let w = self.q.neg().div(&two_a)?;
        Ok(QSpaceFunctions {
            e: SqrtExt::odd_part(&ctx, e),
            w: SqrtExt::odd_part(&ctx, w),
            f: SqrtExt::odd_part(&ctx, f),
            frame: Frame::q().with_max_order(self.frame.max_order),
        })
    }
}

/// `(ℓ, s²)` for the detached `s = z′`: `s² = 2A` and `ℓ = A′/(2A)`; a formal
/// `σ` stands in when `A ≡ 0`.
fn speed_context(a: &Rde, frame: &Frame) -> Result<(Rde, Rde)> {
    let square = if a.is_zero() { Rde::var(Var::jet(Func::Speed, 0)) } else { a.scale(2) };
    let ld = frame.derive(&square)?.div(&square.scale(2))?;
    Ok((ld, square))
}

/// `E`, `W`, `F` together with the q-frame they are differentiated in.
#[derive(Clone, Debug)]
pub struct QSpaceFunctions<S: Scalar> {
    pub e: S,
    pub w: S,
    pub f: S,
    pub frame: Frame,
}

impl QSpaceFunctions<Rde> {
    /// `E`, `W`, `F` as free q-jets.
    pub fn free(max_order: u8) -> QSpaceFunctions<Rde> {
        QSpaceFunctions {
            e: Rde::var(Var::jet(Func::E, 0)),
            w: Rde::var(Var::jet(Func::Super, 0)),
            f: Rde::var(Var::jet(Func::FQ, 0)),
            frame: Frame::q().with_max_order(max_order),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Potentials<S> {
    pub plus: S,
    pub minus: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionResiduals<S> {
    pub r2: S,
    pub r3: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Invariants<S> {
    pub i1: S,
    pub i2: S,
    pub i3: S,
}

impl<S: Scalar> QSpaceFunctions<S> {
    fn d(&self, x: &S) -> Result<S> {
        x.s_derive(&self.frame)
    }

    /// `V± = W²/2 − (2E′ − E²)/3 − (2F′ + 2WF − 2EF − F²)/6 ± (3W′ − F′)/2`.
    pub fn potentials(&self) -> Result<Potentials<S>> {
        let (e, w, f) = (&self.e, &self.w, &self.f);
        let (de, dw, df) = (self.d(e)?, self.d(w)?, self.d(f)?);
        let common = w
            .s_mul(w)
            .s_scale(1, 2)
            .s_sub(&de.s_scale(2, 1).s_sub(&e.s_mul(e)).s_scale(1, 3))
            .s_sub(
                &df.s_scale(2, 1)
                    .s_add(&w.s_mul(f).s_scale(2, 1))
                    .s_sub(&e.s_mul(f).s_scale(2, 1))
                    .s_sub(&f.s_mul(f))
                    .s_scale(1, 6),
            );
        let odd = dw.s_scale(3, 1).s_sub(&df).s_scale(1, 2);
        Ok(Potentials { plus: common.s_add(&odd), minus: common.s_sub(&odd) })
    }

    /// `(F₁, F₂)`.
    pub fn f1_f2(&self) -> Result<(S, S)> {
        let (e, w, f) = (&self.e, &self.w, &self.f);
        let (de, dw, df) = (self.d(e)?, self.d(w)?, self.d(f)?);
        // F′ − 2WF + 2EF + F²
        let g = df.s_sub(&w.s_mul(f).s_scale(2, 1)).s_add(&e.s_mul(f).s_scale(2, 1)).s_add(&f.s_mul(f));
        let f1 = dw.s_add(&e.s_mul(w)).s_sub(&g.s_scale(1, 4));
        let f2 = de.s_add(&e.s_mul(e)).s_add(&g.s_scale(1, 2));
        Ok((f1, f2))
    }

    /// Left sides of the two integrability conditions.
    pub fn condition_residuals(&self) -> Result<ConditionResiduals<S>> {
        let (e, f) = (&self.e, &self.f);
        let (f1, f2) = self.f1_f2()?;
        let df1 = self.d(&f1)?;
        let df2 = self.d(&f2)?;
        let mixed = df1.s_sub(&df2.s_scale(1, 6));
        let r2 = self.d(&df1)?.s_sub(&e.s_mul(&df1)).s_sub(&f.s_mul(&mixed).s_scale(1, 2));
        let inner = self.d(&df2)?.s_sub(&e.s_mul(&df2));
        let outer = self.d(&inner)?.s_sub(&e.s_scale(2, 1).s_add(&f.s_scale(3, 2)).s_mul(&inner));
        let df = self.d(f)?;
        let k = df.s_scale(2, 1).s_sub(&e.s_mul(f).s_scale(2, 1)).s_sub(&f.s_mul(f));
        let r3 = outer.s_add(&k.s_mul(&mixed).s_scale(3, 2));
        Ok(ConditionResiduals { r2, r3 })
    }

    pub fn invariants(&self) -> Result<Invariants<S>> {
        let (e, w, f) = (&self.e, &self.w, &self.f);
        let de = self.d(e)?;
        let df = self.d(f)?;
        let ddf = self.d(&df)?;
        let i1 = w.s_sub(&f.s_scale(1, 3));
        let i2 = de
            .s_scale(2, 1)
            .s_add(&df)
            .s_sub(&e.s_mul(e))
            .s_sub(&e.s_mul(f))
            .s_sub(&f.s_mul(f).s_scale(1, 3));
        let i3 = ddf
            .s_sub(&de.s_mul(f))
            .s_sub(&e.s_mul(&df).s_scale(3, 1))
            .s_sub(&f.s_mul(&df).s_scale(2, 1))
            .s_add(&e.s_mul(e).s_mul(f).s_scale(2, 1))
            .s_add(&e.s_mul(f).s_mul(f).s_scale(2, 1))
            .s_add(&f.s_pow(3).s_scale(4, 9));
        Ok(Invariants { i1, i2, i3 })
    }

    /// `(D + W − E − F)(D + W)(D + W + E)`.
    pub fn p3_minus(&self) -> Result<LinearDiffOperator<S>> {
        let fr = self.frame;
        let [p1, p2, p3] = self.factors();
        LinearDiffOperator::from_factors(fr, &[p1, p2, p3])
    }

    /// The three first-order factors of `P₃⁻`, leftmost first.
    pub fn factors(&self) -> [LinearDiffOperator<S>; 3] {
        let (e, w, f) = (&self.e, &self.w, &self.f);
        let fr = self.frame;
        [
            LinearDiffOperator::first_order(fr, w.s_sub(e).s_sub(f)),
            LinearDiffOperator::first_order(fr, w.clone()),
            LinearDiffOperator::first_order(fr, w.s_add(e)),
        ]
    }

    /// `P₃⁻H⁻ − H⁺P₃⁻` with `H± = −D²/2 + V±`.
    pub fn intertwining_residual(&self) -> Result<LinearDiffOperator<S>> {
        let v = self.potentials()?;
        let p = self.p3_minus()?;
        let hm = hamiltonian(self.frame, &v.minus);
        let hp = hamiltonian(self.frame, &v.plus);
        p.compose(&hm)?.sub(&hp.compose(&p)?)
    }
}

impl<S: Scalar> QSpaceFunctions<S> {
    /// `−2R₂·D − R₂′ − R₃/6 + (F/2 − 2W)R₂`, the intertwining residual written
    /// through the condition residuals.
    pub fn intertwining_from_conditions(&self) -> Result<LinearDiffOperator<S>> {
        let c = self.condition_residuals()?;
        let dr2 = self.d(&c.r2)?;
        let k = self.f.s_scale(1, 2).s_sub(&self.w.s_scale(2, 1));
        let c0 = dr2.s_neg().s_sub(&c.r3.s_scale(1, 6)).s_add(&k.s_mul(&c.r2));
        Ok(LinearDiffOperator::new(self.frame, vec![c0, c.r2.s_scale(-2, 1)]))
    }
}

/// `−D²/2 + V`.
pub fn hamiltonian<S: Scalar>(frame: Frame, v: &S) -> LinearDiffOperator<S> {
    LinearDiffOperator::new(frame, vec![v.clone(), v.zero_like(), v.ratio_like(-1, 2)])
}

/// `D³ + 3I₁D² + (3I₁′ + 3I₁² + I₂)D + I₁″ + 3I₁I₁′ + I₁³ + I₁I₂ + I₂′/2 − I₃/6`.
pub fn supercharge_from_invariants<S: Scalar>(inv: &Invariants<S>, frame: &Frame) -> Result<LinearDiffOperator<S>> {
    let (i1, i2, i3) = (&inv.i1, &inv.i2, &inv.i3);
    let di1 = i1.s_derive(frame)?;
    let ddi1 = di1.s_derive(frame)?;
    let di2 = i2.s_derive(frame)?;
    let c2 = i1.s_scale(3, 1);
    let c1 = di1.s_scale(3, 1).s_add(&i1.s_mul(i1).s_scale(3, 1)).s_add(i2);
    let c0 = ddi1
        .s_add(&i1.s_mul(&di1).s_scale(3, 1))
        .s_add(&i1.s_pow(3))
        .s_add(&i1.s_mul(i2))
        .s_add(&di2.s_scale(1, 2))
        .s_sub(&i3.s_scale(1, 6));
    Ok(LinearDiffOperator::new(*frame, vec![c0, c1, c2, i1.one_like()]))
}

/// `V± = I₁²/2 − I₂/3 ± 3I₁′/2`.
pub fn potential_from_invariants<S: Scalar>(i1: &S, i2: &S, frame: &Frame) -> Result<Potentials<S>> {
    let common = i1.s_mul(i1).s_scale(1, 2).s_sub(&i2.s_scale(1, 3));
    let odd = i1.s_derive(frame)?.s_scale(3, 2);
    Ok(Potentials { plus: common.s_add(&odd), minus: common.s_sub(&odd) })
}

/// Free invariant jets `I₁, I₂, I₃` over q.
pub fn free_invariants() -> Invariants<Rde> {
    Invariants {
        i1: Rde::var(Var::jet(Func::Inv(1), 0)),
        i2: Rde::var(Var::jet(Func::Inv(2), 0)),
        i3: Rde::var(Var::jet(Func::Inv(3), 0)),
    }
}

/// Additive shifts of the factors `P₃₁⁻, P₃₂⁻, P₃₃⁻` under a frame change, as
/// coefficients of `w′`. `derived` comes from the transformed `Ê, Ŵ, F̂`;
/// `displayed` is the closed form `(−W₂,₁′/W₂,₁, W₂,₁′/W₂,₁ − φ₁′/φ₁, φ₁′/φ₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorShifts {
    pub derived: [Rde; 3],
    pub displayed: [Rde; 3],
}

impl FactorShifts {
    pub fn displayed_sum(&self) -> Rde {
        self.displayed.iter().fold(Rde::zero(), |acc, x| acc.add(x))
    }

    pub fn derived_sum(&self) -> Rde {
        self.derived.iter().fold(Rde::zero(), |acc, x| acc.add(x))
    }
}

/// `ΔE = −(W₂,₁′/W₂,₁ − 2φ₁′/φ₁)`, `ΔW = W₂,₁′/W₂,₁ − φ₁′/φ₁` and
/// `ΔF = f‴(w)/f″(w) − [F-bracket]`, all per unit `w′`.
pub fn factor_shifts(t: &FrameTriple) -> Result<FactorShifts> {
    let de = t.e_shift()?.neg();
    let dw = t.w_shift()?;
    let f_hat = Rde::var(Var::f(3)).div(&Rde::var(Var::f(2)))?;
    let df = f_hat.sub(&t.f_bracket()?);
    let derived = [dw.sub(&de).sub(&df), dw.clone(), dw.add(&de)];
    let lw = t.log_derivative(&t.wron(2, 1))?;
    let l1 = t.log_derivative(t.phi(1))?;
    let displayed = [lw.neg(), lw.sub(&l1), l1];
    Ok(FactorShifts { derived, displayed })
}

impl TypeBSystem {
    /// Both integrability conditions, even and odd `s`-parts separately, and
    /// the full intertwining residual.
    pub fn verify_conditions(&self) -> VerificationCheck {
        let start = Instant::now();
        let run = || -> Result<VerificationCheck> {
            let qs = self.qspace_functions()?;
            let c = qs.condition_residuals()?;
            let mut parts = vec![
                ("R₂ even", c.r2.even().clone()),
                ("R₂ odd", c.r2.odd().clone()),
                ("R₃ even", c.r3.even().clone()),
                ("R₃ odd", c.r3.odd().clone()),
            ];
            for (k, x) in qs.intertwining_residual()?.coeffs().iter().enumerate() {
                let label = if k == 0 { "intertwining D⁰" } else { "intertwining D¹⁺" };
                parts.push((label, x.even().clone()));
                parts.push((label, x.odd().clone()));
            }
            Ok(VerificationCheck::from_labelled("conditions", &parts, start))
        };
        run().unwrap_or_else(|e| VerificationCheck::errored("conditions", &e, start))
    }
}

/// With `E, W, F` free: `P₃⁻` from the invariants against the factored
/// product, and `V±` from the invariants against the direct potentials.
pub fn verify_reconstructions(max_order: u8) -> VerificationCheck {
    let start = Instant::now();
    let run = || -> Result<VerificationCheck> {
        let qs = QSpaceFunctions::free(max_order);
        let inv = qs.invariants()?;
        let p_direct = qs.p3_minus()?;
        let p_inv = supercharge_from_invariants(&inv, &qs.frame)?;
        let v_direct = qs.potentials()?;
        let v_inv = potential_from_invariants(&inv.i1, &inv.i2, &qs.frame)?;
        let mut parts: Vec<(&str, Rde)> = p_inv.sub(&p_direct)?.coeffs().iter().map(|x| ("P₃⁻", x.clone())).collect();
        parts.push(("V⁺", v_inv.plus.sub(&v_direct.plus)));
        parts.push(("V⁻", v_inv.minus.sub(&v_direct.minus)));
        Ok(VerificationCheck::from_labelled("reconstructions", &parts, start))
    };
    run().unwrap_or_else(|e| VerificationCheck::errored("reconstructions", &e, start))
}

/// With `E, W, F` free the intertwining residual equals its expression
/// through the condition residuals; it is first order, not a multiplication.
pub fn verify_intertwining_decomposition(max_order: u8) -> VerificationCheck {
    let start = Instant::now();
    let run = || -> Result<VerificationCheck> {
        let qs = QSpaceFunctions::free(max_order);
        let r = qs.intertwining_residual()?;
        let parts: Vec<(&str, Rde)> =
            r.sub(&qs.intertwining_from_conditions()?)?.coeffs().iter().map(|x| ("residual", x.clone())).collect();
        let check = VerificationCheck::from_labelled("intertwining", &parts, start);
        let order = r.order().map_or("zero".to_string(), |k| format!("order {k}"));
        Ok(check.with_detail(format!("free residual has {order}")))
    };
    run().unwrap_or_else(|e| VerificationCheck::errored("intertwining", &e, start))
}

/// Derived and displayed factor shifts agree, and each set sums to zero.
pub fn verify_factor_shifts(t: &FrameTriple) -> VerificationCheck {
    let start = Instant::now();
    match factor_shifts(t) {
        Ok(s) => {
            let mut parts = vec![("Σ displayed", s.displayed_sum()), ("Σ derived", s.derived_sum())];
            for k in 0..3 {
                parts.push(("derived − displayed", s.derived[k].sub(&s.displayed[k])));
            }
            VerificationCheck::from_labelled("factor-shifts", &parts, start)
        }
        Err(e) => VerificationCheck::errored("factor-shifts", &e, start),
    }
}
