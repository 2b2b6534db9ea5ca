//! Type A as the `f = z²` limit: the coefficient dictionary with Ω, the
//! transvectants of the quartic `Aᴬ` and quadratic `Qᴬ`, and the GL(2)
//! fractional-linear maps embedded in GL(3) and, binomially, in GL(N).

use crate::diffalg::{Frame, Func, Param, Rde, Var};
use crate::error::{KernelError, Result};
use crate::gl3::{gl3_frame, superalgebra_constants, transform_ewf, GL3Matrix};
use crate::matrix::Matrix;
use crate::operators::Op;
use crate::report::VerificationCheck;
use crate::transform::FrameTriple;
use crate::typeb::{factor_shifts, FSpec, OmegaMatrix, QSpaceFunctions, TypeBSystem};
use std::time::Instant;

/// `Aᴬ = a₄z⁴ + … + a₀`, `Qᴬ = b₂z² + b₁z + b₀` and the constant `Rᴬ`.
/// `a[i]`, `b[i]` are the coefficients of `zⁱ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeACoefficients {
    pub a: [Rde; 5],
    pub b: [Rde; 3],
    pub r: Rde,
}

impl TypeACoefficients {
    pub fn zero() -> TypeACoefficients {
        TypeACoefficients {
            a: std::array::from_fn(|_| Rde::zero()),
            b: std::array::from_fn(|_| Rde::zero()),
            r: Rde::zero(),
        }
    }

    pub fn from_ints(a: [i64; 5], b: [i64; 3], r: i64) -> TypeACoefficients {
        TypeACoefficients { a: a.map(Rde::int), b: b.map(Rde::int), r: Rde::int(r) }
    }

    /// Nine independent symbols.
    pub fn symbolic() -> TypeACoefficients {
        let s = |i: u8| Rde::var(Var::param(Param::TypeA(i)));
        TypeACoefficients { a: std::array::from_fn(|i| s(i as u8)), b: std::array::from_fn(|i| s(5 + i as u8)), r: s(8) }
    }

    fn poly_in_z(coeffs: &[Rde]) -> Rde {
        let z = Rde::var(Var::z());
        coeffs.iter().rev().fold(Rde::zero(), |acc, c| acc.mul(&z).add(c))
    }

    pub fn quartic(&self) -> Rde {
        Self::poly_in_z(&self.a)
    }

    pub fn quadratic(&self) -> Rde {
        Self::poly_in_z(&self.b)
    }
}

/// The dictionary solved for Ω, `c₀` first since `a₂` and `b₁` use it.
pub fn omega_from_type_a(c: &TypeACoefficients) -> OmegaMatrix {
    let (a, b, r) = (&c.a, &c.b, &c.r);
    let half = Rde::ratio(1, 2);
    let c0 = a[2].mul(&Rde::ratio(1, 3)).sub(&b[1]).add(r);
    let c1 = a[3].sub(&b[2].scale(2));
    let c2 = a[4].scale(2);
    let b0 = b[0].sub(&a[1].mul(&half));
    let b1 = b[1].sub(&a[2]).add(&c0);
    let b2 = a[3].mul(&half).add(&b[2]).neg();
    let w0 = a[0].scale(2);
    let w1 = a[1].add(&b[0].scale(2));
    let w2 = b[1].scale(2).add(&c0);
    let m = Matrix::from_rows(vec![vec![c0, c1, c2], vec![b0, b1, b2], vec![w0, w1, w2]]).expect("3×3");
    OmegaMatrix::new(m).expect("3×3")
}

/// Inverse of [`omega_from_type_a`]. The nine relations are linear and
/// invertible, so every Ω with constant entries has a preimage; entries that
/// depend on `z` or other jets are rejected.
pub fn type_a_from_omega(omega: &OmegaMatrix) -> Result<TypeACoefficients> {
    for row in omega.matrix().rows() {
        for x in row {
            if x.vars().iter().any(|v| !v.is_param()) {
                return Err(KernelError::NotInTypeAImage(format!("entry {x} is not constant")));
            }
        }
    }
    let (c, b, a) = (|i| omega.c(i).clone(), |i| omega.b(i).clone(), |i| omega.a(i).clone());
    let quarter = Rde::ratio(1, 4);
    let half = Rde::ratio(1, 2);
    let b2 = b(2).scale(2).add(&c(1)).mul(&quarter).neg();
    let a3 = c(1).add(&b2.scale(2));
    let b0 = a(1).add(&b(0).scale(2)).mul(&quarter);
    let a1 = a(1).sub(&b0.scale(2));
    let b1 = a(2).sub(&c(0)).mul(&half);
    let a2 = b1.add(&c(0)).sub(&b(1));
    let r = c(0).sub(&a2.mul(&Rde::ratio(1, 3))).add(&b1);
    let out = TypeACoefficients { a: [a(0).mul(&half), a1, a2, a3, c(2).mul(&half)], b: [b0, b1, b2], r };
    if omega_from_type_a(&out) != *omega {
        return Err(KernelError::NotInTypeAImage("the nine relations are inconsistent".into()));
    }
    Ok(out)
}

/// `−AᴬD² − (Qᴬ − Aᴬ′/2)D − Aᴬ″/6 + Qᴬ′ − Rᴬ` in the z frame.
pub fn type_a_hamiltonian(c: &TypeACoefficients, max_order: u8) -> Result<Op> {
    let frame = Frame::z().with_max_order(max_order);
    let (a, q) = (c.quartic(), c.quadratic());
    let a1 = frame.derive(&a)?;
    let a2 = frame.derive(&a1)?;
    let q1 = frame.derive(&q)?;
    let d1 = q.sub(&a1.mul(&Rde::ratio(1, 2))).neg();
    let d0 = a2.mul(&Rde::ratio(-1, 6)).add(&q1).sub(&c.r);
    Ok(Op::new(frame, vec![d0, d1, a.neg()]))
}

fn op_residuals(x: &Op, y: &Op) -> Result<Vec<Rde>> {
    Ok(x.sub(y)?.coeffs().to_vec())
}

/// The type B Hamiltonian of `omega_from_type_a(c)` at `f = z²` against the
/// type A formula, plus the round trip through the inverse dictionary.
pub fn verify_type_a_limit(c: &TypeACoefficients, max_order: u8) -> VerificationCheck {
    let start = Instant::now();
    let name = "typea-limit";
    let run = || -> Result<VerificationCheck> {
        let omega = omega_from_type_a(c);
        let back = type_a_from_omega(&omega)?;
        let z2 = FSpec::Concrete(Rde::var(Var::z()).pow(2));
        let sys = TypeBSystem::build(omega, z2, max_order)?;
        let mut res = op_residuals(&sys.h_minus, &type_a_hamiltonian(c, max_order)?)?;
        res.extend(back.a.iter().zip(&c.a).map(|(x, y)| x.sub(y)));
        res.extend(back.b.iter().zip(&c.b).map(|(x, y)| x.sub(y)));
        res.push(back.r.sub(&c.r));
        Ok(VerificationCheck::from_residuals(name, &res, start))
    };
    run().unwrap_or_else(|e| VerificationCheck::errored(name, &e, start))
}

/// The same check entered from Ω: the type A coefficients are read off Ω.
pub fn verify_type_a_limit_for_omega(omega: &OmegaMatrix, max_order: u8) -> VerificationCheck {
    let start = Instant::now();
    match type_a_from_omega(omega) {
        Ok(c) => verify_type_a_limit(&c, max_order),
        Err(e) => VerificationCheck::errored("typea-limit", &e, start),
    }
}

/// `D₂[Q]`, `i₂[A]`, `j₃[A]`, `I₁,₂[A, Q]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Transvectants {
    pub d2: Rde,
    pub i2: Rde,
    pub j3: Rde,
    pub i12: Rde,
}

fn lin(terms: &[(i64, Vec<&Rde>)]) -> Rde {
    terms.iter().fold(Rde::zero(), |acc, (k, fs)| {
        let prod = fs.iter().fold(Rde::int(*k), |p, f| p.mul(f));
        acc.add(&prod)
    })
}

/// `I₁,₂` is symmetric under `aᵢ ↔ a₄₋ᵢ`, `bᵢ ↔ b₂₋ᵢ`; its last term is
/// `6a₀b₂²`.
pub fn transvectants(c: &TypeACoefficients) -> Transvectants {
    let (a, b) = (&c.a, &c.b);
    let d2 = lin(&[(4, vec![&b[0], &b[2]]), (-1, vec![&b[1], &b[1]])]);
    let i2 = lin(&[(12, vec![&a[0], &a[4]]), (-3, vec![&a[1], &a[3]]), (1, vec![&a[2], &a[2]])]);
    let j3 = lin(&[
        (72, vec![&a[0], &a[2], &a[4]]),
        (-27, vec![&a[0], &a[3], &a[3]]),
        (-27, vec![&a[1], &a[1], &a[4]]),
        (9, vec![&a[1], &a[2], &a[3]]),
        (-2, vec![&a[2], &a[2], &a[2]]),
    ])
    .mul(&Rde::ratio(1, 2));
    let i12 = lin(&[
        (6, vec![&a[4], &b[0], &b[0]]),
        (-3, vec![&a[3], &b[0], &b[1]]),
        (2, vec![&a[2], &b[0], &b[2]]),
        (1, vec![&a[2], &b[1], &b[1]]),
        (-3, vec![&a[1], &b[1], &b[2]]),
        (6, vec![&a[0], &b[2], &b[2]]),
    ]);
    Transvectants { d2, i2, j3, i12 }
}

/// `I₁,₂` with the last term read as `6a₀b₀²`; kept to show that reading fails.
pub fn i12_literal(c: &TypeACoefficients) -> Rde {
    let t = transvectants(c);
    let (a, b) = (&c.a, &c.b);
    t.i12.sub(&lin(&[(6, vec![&a[0], &b[2], &b[2]])])).add(&lin(&[(6, vec![&a[0], &b[0], &b[0]])]))
}

/// `C₀ − Rᴬ`, `3C₁ + i₂ − 3D₂`, `27C₂ − 2j₃ − 18I₁,₂` for Ω from `c`.
pub fn reduction_residuals(c: &TypeACoefficients, i12: &Rde) -> [(&'static str, Rde); 3] {
    let k = superalgebra_constants(&omega_from_type_a(c));
    let t = transvectants(c);
    [
        ("C₀ = Rᴬ", k.c0.sub(&c.r)),
        ("3C₁ = −i₂ + 3D₂", k.c1.scale(3).add(&t.i2).sub(&t.d2.scale(3))),
        ("27C₂ = 2j₃ + 18I₁,₂", k.c2.scale(27).sub(&t.j3.scale(2)).sub(&i12.scale(18))),
    ]
}

pub fn verify_transvectants(c: &TypeACoefficients) -> VerificationCheck {
    let start = Instant::now();
    let i12 = transvectants(c).i12;
    let parts = reduction_residuals(c, &i12);
    VerificationCheck::from_labelled("transvectants", &parts, start)
}


/// `z = (αw + β)/(γw + δ)` with `Δ = αδ − βγ ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusParameters {
    pub alpha: Rde,
    pub beta: Rde,
    pub gamma: Rde,
    pub delta: Rde,
}

impl MobiusParameters {
    pub fn new(alpha: Rde, beta: Rde, gamma: Rde, delta: Rde) -> Result<MobiusParameters> {
        let m = MobiusParameters { alpha, beta, gamma, delta };
        if m.det().is_zero() {
            return Err(KernelError::Degenerate("Δ = αδ − βγ = 0".into()));
        }
        Ok(m)
    }

    pub fn from_ints(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<MobiusParameters> {
        MobiusParameters::new(Rde::int(alpha), Rde::int(beta), Rde::int(gamma), Rde::int(delta))
    }

    pub fn identity() -> MobiusParameters {
        MobiusParameters::from_ints(1, 0, 0, 1).expect("Δ = 1")
    }

    /// Independent symbols; distinct `set`s give independent parameter sets.
    pub fn symbolic(set: u8) -> MobiusParameters {
        let s = |i: u8| Rde::var(Var::param(Param::Mobius(4 * set + i)));
        MobiusParameters::new(s(0), s(1), s(2), s(3)).expect("generic Δ ≠ 0")
    }

    pub fn det(&self) -> Rde {
        self.alpha.mul(&self.delta).sub(&self.beta.mul(&self.gamma))
    }

    /// Product of the 2×2 matrices `(α β / γ δ)`, `self` on the left; as
    /// maps this is `self ∘ other`.
    pub fn compose(&self, other: &MobiusParameters) -> MobiusParameters {
        let dot = |x: &Rde, y: &Rde, u: &Rde, v: &Rde| x.mul(y).add(&u.mul(v));
        MobiusParameters {
            alpha: dot(&self.alpha, &other.alpha, &self.beta, &other.gamma),
            beta: dot(&self.alpha, &other.beta, &self.beta, &other.delta),
            gamma: dot(&self.gamma, &other.alpha, &self.delta, &other.gamma),
            delta: dot(&self.gamma, &other.beta, &self.delta, &other.delta),
        }
    }

    /// `z` as a function of `w`.
    pub fn z_of_w(&self) -> Rde {
        let w = Rde::var(Var::w());
        let num = self.alpha.mul(&w).add(&self.beta);
        let den = self.gamma.mul(&w).add(&self.delta);
        num.div(&den).expect("Δ ≠ 0 keeps γw + δ nonzero")
    }
}

/// Rows `(δ², 2γδ, γ²)`, `(βδ, αδ + βγ, αγ)`, `(β², 2αβ, α²)`.
pub fn gl2_embedding(m: &MobiusParameters) -> Result<GL3Matrix> {
    let (a, b, g, d) = (&m.alpha, &m.beta, &m.gamma, &m.delta);
    let rows = vec![
        vec![d.mul(d), g.mul(d).scale(2), g.mul(g)],
        vec![b.mul(d), a.mul(d).add(&b.mul(g)), a.mul(g)],
        vec![b.mul(b), a.mul(b).scale(2), a.mul(a)],
    ];
    GL3Matrix::new(Matrix::from_rows(rows)?)
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// `λᵢⱼ = Σₖ C(N−i, j−k−1) C(i−1, k) αᵏ β^(i−k−1) γ^(j−k−1) δ^(N−i−j+k+1)`:
/// row `i` holds the coefficients of `(αw+β)^(i−1)(γw+δ)^(N−i)` in `1, w, …`.
pub fn gln_embedding(n: usize, m: &MobiusParameters) -> Result<Matrix> {
    if n < 2 {
        return Err(KernelError::Invalid(format!("N = {n}; need N ≥ 2")));
    }
    if m.det().is_zero() {
        return Err(KernelError::Degenerate("Δ = αδ − βγ = 0".into()));
    }
    let big_n = n as i64;
    Ok(Matrix::from_fn(n, |r, c| {
        let (i, j) = (r as i64 + 1, c as i64 + 1);
        (0..j).fold(Rde::zero(), |acc, k| {
            let coeff = binomial(big_n - i, j - k - 1) * binomial(i - 1, k);
            if coeff == 0 {
                return acc;
            }
            let term = m
                .alpha
                .pow(k as u32)
                .mul(&m.beta.pow((i - k - 1) as u32))
                .mul(&m.gamma.pow((j - k - 1) as u32))
                .mul(&m.delta.pow((big_n - i - j + k + 1) as u32));
            acc.add(&term.scale(coeff))
        })
    }))
}

/// How the embedding meets composition of parameter matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingOrder {
    /// `Λ(m₁m₂) = Λ(m₁)Λ(m₂)`.
    Homomorphism,
    /// `Λ(m₁m₂) = Λ(m₂)Λ(m₁)`.
    AntiHomomorphism,
}

impl EmbeddingOrder {
    pub fn describe(self) -> &'static str {
        match self {
            EmbeddingOrder::Homomorphism => "Λ(m₁m₂) = Λ(m₁)Λ(m₂)",
            EmbeddingOrder::AntiHomomorphism => "Λ(m₁m₂) = Λ(m₂)Λ(m₁)",
        }
    }
}

pub fn embedding_order_holds(order: EmbeddingOrder, n: usize, m1: &MobiusParameters, m2: &MobiusParameters) -> Result<bool> {
    let lhs = gln_embedding(n, &m1.compose(m2))?;
    let (l1, l2) = (gln_embedding(n, m1)?, gln_embedding(n, m2)?);
    let rhs = match order {
        EmbeddingOrder::Homomorphism => l1.mul(&l2),
        EmbeddingOrder::AntiHomomorphism => l2.mul(&l1),
    };
    Ok(lhs == rhs)
}

/// Settles the convention on two fully symbolic parameter sets at `N = 3`.
pub fn determine_embedding_order() -> Result<EmbeddingOrder> {
    let (m1, m2) = (MobiusParameters::symbolic(0), MobiusParameters::symbolic(1));
    for order in [EmbeddingOrder::Homomorphism, EmbeddingOrder::AntiHomomorphism] {
        if embedding_order_holds(order, 3, &m1, &m2)? {
            return Ok(order);
        }
    }
    Err(KernelError::Invalid("embedding is neither multiplicative nor anti-multiplicative".into()))
}

/// The GL(3) frame of `gl2_embedding(m)` with `f(w) = w²`.
pub fn type_a_frame(m: &MobiusParameters, max_order: u8) -> Result<FrameTriple> {
    let t = gl3_frame(&gl2_embedding(m)?, max_order)?;
    let w2 = Rde::var(Var::w()).pow(2);
    let phi: Vec<Rde> = (1..=3).map(|i| t.phi(i).substitute_f(&w2, &Frame::w())).collect::<Result<_>>()?;
    FrameTriple::new(t.frame(), [phi[0].clone(), phi[1].clone(), phi[2].clone()])
}

/// `Ê = E + 2γw′/(γw + δ)`, `Ŵ = W`, `F̂ = 0`, with `w(q)` a jet over q.
pub fn type_a_ewf_transform(m: &MobiusParameters, e: &Rde, w: &Rde) -> Result<(Rde, Rde, Rde)> {
    let wv = Rde::var(Var::w());
    let wp = Rde::var(Var::jet(Func::W, 1));
    let shift = m.gamma.scale(2).mul(&wp).div(&m.gamma.mul(&wv).add(&m.delta))?;
    Ok((e.add(&shift), w.clone(), Rde::zero()))
}

/// The GL(2) subgroup inside GL(3): `det Λ = Δ³`, `W₂,₁ = Δφ₁`, the binomial
/// formula at `N = 3`, the type A shifts of `E, W, F` against the GL(3)
/// rule and against the z-form `E − 2γz′/(γz − α)`, the factor shifts
/// `(−s, 0, +s)` per unit `w′` with `s = 2γ/(γw + δ)`.
pub fn verify_gl2_subgroup(m: &MobiusParameters, max_order: u8) -> VerificationCheck {
    let start = Instant::now();
    let name = "embedding";
    let run = || -> Result<VerificationCheck> {
        let lam = gl2_embedding(m)?;
        let delta = m.det();
        let t = type_a_frame(m, max_order)?;
        let e = Rde::var(Var::jet(Func::E, 0));
        let w = Rde::var(Var::jet(Func::Super, 0));
        let (eh, wh, fh) = type_a_ewf_transform(m, &e, &w)?;
        let (ge, gw, gf) = transform_ewf(&e, &w, &Rde::zero(), &t)?;
        // z-form: z′ = (dz/dw)·w′.
        let z = m.z_of_w();
        let zp = Frame::w().derive(&z)?.mul(&Rde::var(Var::jet(Func::W, 1)));
        let z_form = e.sub(&m.gamma.scale(2).mul(&zp).div(&m.gamma.mul(&z).sub(&m.alpha))?);
        let shifts = factor_shifts(&t)?;
        let wp = Rde::var(Var::jet(Func::W, 1));
        let s = eh.sub(&e).div(&wp)?;
        let w2 = Rde::var(Var::w()).pow(2);
        let derived: Vec<Rde> =
            shifts.derived.iter().map(|x| x.substitute_f(&w2, &Frame::w())).collect::<Result<_>>()?;
        let parts = [
            ("det Λ = Δ³", lam.det().sub(&delta.pow(3))),
            ("W₂,₁ = Δφ₁", t.wron(2, 1).sub(&delta.mul(t.phi(1)))),
            ("N = 3 binomial form", matrix_residual(&gln_embedding(3, m)?, lam.matrix())),
            ("Ê", eh.sub(&ge)),
            ("Ŵ", wh.sub(&gw)),
            ("F̂", fh.sub(&gf)),
            ("Ê z-form", eh.sub(&z_form)),
            ("P₃₁ shift", shifts.displayed[0].sub(&s.neg())),
            ("P₃₂ shift", shifts.displayed[1].clone()),
            ("P₃₃ shift", shifts.displayed[2].sub(&s)),
            ("P₃₁ shift from Ê, Ŵ, F̂", derived[0].add(&s)),
            ("P₃₂ shift from Ê, Ŵ, F̂", derived[1].clone()),
            ("P₃₃ shift from Ê, Ŵ, F̂", derived[2].sub(&s)),
        ];
        Ok(VerificationCheck::from_labelled(name, &parts, start))
    };
    run().unwrap_or_else(|e| VerificationCheck::errored(name, &e, start))
}

/// First nonzero entry of `x − y`, or zero.
fn matrix_residual(x: &Matrix, y: &Matrix) -> Rde {
    let d = x.add(&y.scale(&Rde::int(-1)));
    d.rows().into_iter().flatten().find(|r| !r.is_zero()).unwrap_or_else(Rde::zero)
}

/// Multiplicativity of the binomial embedding for every `N` in `ns` and every
/// pair, under the convention fixed by [`determine_embedding_order`].
pub fn verify_gln_multiplicativity(ns: &[usize], pairs: &[(MobiusParameters, MobiusParameters)]) -> VerificationCheck {
    let start = Instant::now();
    let name = "gln-multiplicativity";
    let run = || -> Result<VerificationCheck> {
        let order = determine_embedding_order()?;
        for &n in ns {
            for (m1, m2) in pairs {
                if !embedding_order_holds(order, n, m1, m2)? {
                    return Ok(VerificationCheck::new(name, false, start)
                        .with_residual(format!("N = {n}, m₁ = {m1:?}, m₂ = {m2:?}"))
                        .with_detail(order.describe()));
                }
            }
        }
        Ok(VerificationCheck::new(name, true, start).with_detail(order.describe()))
    };
    run().unwrap_or_else(|e| VerificationCheck::errored(name, &e, start))
}

/// `I[E, W, 0] = (W, 2E′ − E², 0)` with `E`, `W` free jets.
pub fn verify_invariant_reduction(max_order: u8) -> VerificationCheck {
    let start = Instant::now();
    let name = "invariant-reduction";
    let run = || -> Result<VerificationCheck> {
        let free = QSpaceFunctions::free(max_order);
        let sys = QSpaceFunctions { f: Rde::zero(), ..free };
        let inv = sys.invariants()?;
        let e = &sys.e;
        let de = sys.frame.derive(e)?;
        let parts = [
            ("I₁ = W", inv.i1.sub(&sys.w)),
            ("I₂ = 2E′ − E²", inv.i2.sub(&de.scale(2).sub(&e.mul(e)))),
            ("I₃ = 0", inv.i3),
        ];
        Ok(VerificationCheck::from_labelled(name, &parts, start))
    };
    run().unwrap_or_else(|e| VerificationCheck::errored(name, &e, start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_give_zero_omega() {
        assert_eq!(omega_from_type_a(&TypeACoefficients::zero()), OmegaMatrix::zero());
    }

    #[test]
    fn constant_r_only() {
        let om = omega_from_type_a(&TypeACoefficients::from_ints([0; 5], [0; 3], 3));
        assert_eq!(om, OmegaMatrix::from_ints([[3, 0, 0], [0, 3, 0], [0, 0, 3]]));
    }

    #[test]
    fn inverse_dictionary_round_trips_symbolically() {
        let om = OmegaMatrix::symbolic();
        let c = type_a_from_omega(&om).unwrap();
        assert_eq!(omega_from_type_a(&c), om);
        let c = TypeACoefficients::symbolic();
        assert_eq!(type_a_from_omega(&omega_from_type_a(&c)).unwrap(), c);
    }

    #[test]
    fn nonconstant_entries_are_not_in_the_image() {
        let mut rows = OmegaMatrix::zero().matrix().rows();
        rows[0][0] = Rde::var(Var::z());
        let om = OmegaMatrix::new(Matrix::from_rows(rows).unwrap()).unwrap();
        assert!(matches!(type_a_from_omega(&om), Err(KernelError::NotInTypeAImage(_))));
    }

    #[test]
    fn hamiltonian_matches_type_b_symbolically() {
        let c = verify_type_a_limit(&TypeACoefficients::symbolic(), 6);
        assert!(c.passed, "{c}");
    }

    #[test]
    fn transvectant_examples() {
        let q = TypeACoefficients::from_ints([0; 5], [1, 0, 1], 0);
        assert_eq!(transvectants(&q).d2, Rde::int(4));
        let a = TypeACoefficients::from_ints([0, 0, 0, 0, 1], [0; 3], 0);
        let t = transvectants(&a);
        assert!(t.i2.is_zero() && t.j3.is_zero());
    }

    #[test]
    fn reductions_hold_symbolically() {
        let c = TypeACoefficients::symbolic();
        assert!(verify_transvectants(&c).passed);
        let literal = reduction_residuals(&c, &i12_literal(&c));
        assert!(literal[0].1.is_zero() && literal[1].1.is_zero());
        assert!(!literal[2].1.is_zero());
    }

    #[test]
    fn gl2_identity_and_determinant() {
        assert_eq!(gl2_embedding(&MobiusParameters::identity()).unwrap(), GL3Matrix::identity());
        let m = MobiusParameters::symbolic(0);
        assert_eq!(*gl2_embedding(&m).unwrap().det(), m.det().pow(3));
    }

    #[test]
    fn degenerate_parameters_rejected() {
        assert!(MobiusParameters::from_ints(1, 2, 2, 4).is_err());
        assert!(gln_embedding(1, &MobiusParameters::identity()).is_err());
    }

    #[test]
    fn gl2_subgroup_symbolic() {
        let c = verify_gl2_subgroup(&MobiusParameters::symbolic(0), 6);
        assert!(c.passed, "{c}");
    }

    #[test]
    fn gln_small_cases() {
        let m = MobiusParameters::from_ints(2, 3, 5, 7).unwrap();
        let n2 = gln_embedding(2, &m).unwrap();
        assert_eq!(n2, Matrix::from_ints(&[vec![7, 5], vec![3, 2]]));
        for n in 2..6 {
            assert_eq!(gln_embedding(n, &MobiusParameters::identity()).unwrap(), Matrix::identity(n));
        }
    }

    #[test]
    fn embedding_order_is_homomorphism() {
        assert_eq!(determine_embedding_order().unwrap(), EmbeddingOrder::Homomorphism);
    }

    #[test]
    fn invariant_reduction() {
        let c = verify_invariant_reduction(6);
        assert!(c.passed, "{c}");
    }
}
