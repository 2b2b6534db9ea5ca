//! Randomized algebraic properties of the kernel.

use nfold::diffalg::{Frame, Func, Rde, SqrtCtx, SqrtExt, Var};
use nfold::gl3::{adjoint_transform, verify_adjoint_action, verify_f3, verify_invariants, GL3Matrix};
use nfold::instances::{standard_fspecs, InstanceRng};
use nfold::operators::{pullback, Op};
use nfold::transform::{abc_expanded, matrix_form_abc, op_w_to_z, FrameTriple, Location};
use nfold::typea::{gl2_embedding, gln_embedding, verify_gln_multiplicativity};
use nfold::typeb::{verify_factor_shifts, FSpec, OmegaMatrix, TypeBSystem};
use proptest::prelude::*;

const ORDER: u8 = 6;

fn v(x: Var) -> Rde {
    Rde::var(x)
}

fn monomial(vars: &[Var], exps: &[u32], c: i64) -> Rde {
    vars.iter().zip(exps).fold(Rde::int(c), |acc, (x, &e)| acc.mul(&v(*x).pow(e)))
}

/// Polynomials with up to four terms of degree at most 2 in each variable.
fn poly(vars: Vec<Var>) -> impl Strategy<Value = Rde> {
    let n = vars.len();
    prop::collection::vec((-3i64..=3, prop::collection::vec(0u32..=2, n)), 1..=4).prop_map(move |terms| {
        terms.iter().fold(Rde::zero(), |acc, (c, e)| acc.add(&monomial(&vars, e, *c)))
    })
}

fn rde(vars: Vec<Var>) -> impl Strategy<Value = Rde> {
    (poly(vars.clone()), poly(vars)).prop_filter_map("zero denominator", |(n, d)| n.div(&d).ok())
}

fn nonzero(vars: Vec<Var>) -> impl Strategy<Value = Rde> {
    rde(vars).prop_filter("zero", |x| !x.is_zero())
}

fn z_vars() -> Vec<Var> {
    vec![Var::z(), Var::f(0), Var::f(1), Var::jet(Func::Test(0), 0)]
}

fn w_vars() -> Vec<Var> {
    vec![Var::w(), Var::f(0), Var::jet(Func::Phi(1), 1), Var::jet(Func::Test(1), 0)]
}

fn q_vars() -> Vec<Var> {
    vec![Var::jet(Func::Z, 0), Var::jet(Func::Z, 1), Var::f(0), Var::jet(Func::E, 0)]
}

fn z_poly(max_deg: usize) -> impl Strategy<Value = Rde> {
    prop::collection::vec(-4i64..=4, 1..=max_deg + 1).prop_map(|cs| {
        cs.iter().enumerate().fold(Rde::zero(), |acc, (k, c)| acc.add(&Rde::int(*c).mul(&v(Var::z()).pow(k as u32))))
    })
}

fn op(max_order: usize) -> impl Strategy<Value = Op> {
    prop::collection::vec(poly(vec![Var::z(), Var::f(0)]), 1..=max_order + 1).prop_map(|cs| Op::new(Frame::z(), cs))
}

fn gl3(seed: u64) -> GL3Matrix {
    InstanceRng::new(seed).gl3(3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in rde(z_vars()), b in rde(z_vars()), c in rde(z_vars())) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert!(a.add(&a.neg()).is_zero());
        prop_assert!(a.mul(&Rde::one()) == a && a.add(&Rde::zero()) == a);
    }

    #[test]
    fn field_inverses(a in nonzero(z_vars()), b in nonzero(z_vars())) {
        prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        prop_assert_eq!(a.div(&b).unwrap().mul(&b), a.clone());
        prop_assert_eq!(a.mul(&b).inv().unwrap(), a.inv().unwrap().mul(&b.inv().unwrap()));
        prop_assert!(Rde::zero().inv().is_err());
    }

    #[test]
    fn equal_agrees_with_structural_equality(a in rde(z_vars()), b in rde(z_vars())) {
        prop_assert_eq!(a.equal(&b), a == b);
        prop_assert!(a.equal(&a.add(&b).sub(&b)));
    }

    #[test]
    fn leibniz_in_every_frame(
        (za, zb) in (rde(z_vars()), rde(z_vars())),
        (wa, wb) in (rde(w_vars()), rde(w_vars())),
        (qa, qb) in (rde(q_vars()), rde(q_vars())),
    ) {
        for (fr, a, b) in [(Frame::z(), za, zb), (Frame::w(), wa, wb), (Frame::q(), qa, qb)] {
            let lhs = fr.derive(&a.mul(&b)).unwrap();
            let rhs = fr.derive(&a).unwrap().mul(&b).add(&a.mul(&fr.derive(&b).unwrap()));
            prop_assert_eq!(lhs, rhs);
            let quot = fr.derive(&a.add(&b)).unwrap();
            prop_assert_eq!(quot, fr.derive(&a).unwrap().add(&fr.derive(&b).unwrap()));
        }
    }

    #[test]
    fn derivative_of_quotient(a in rde(z_vars()), b in nonzero(z_vars())) {
        let fr = Frame::z();
        let lhs = fr.derive(&a.div(&b).unwrap()).unwrap();
        let rhs = fr.derive(&a).unwrap().mul(&b).sub(&a.mul(&fr.derive(&b).unwrap())).div(&b.pow(2)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// `d/dq e(z, f(z), f′(z))` after substituting `f` equals `z′·d/dz` of the substituted form.
    #[test]
    fn chain_rule_coherence(e in poly(vec![Var::z(), Var::f(0), Var::f(1)]), g in z_poly(4)) {
        let zf = Frame::z();
        let lhs = Frame::q().derive(&e).unwrap().substitute_f(&g, &zf).unwrap();
        let rhs = zf.derive(&e.substitute_f(&g, &zf).unwrap()).unwrap().mul(&v(Var::jet(Func::Z, 1)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalize_idempotent(a in rde(z_vars()), k in nonzero(vec![Var::z(), Var::f(0)])) {
        let again = Rde::new(a.num().clone(), a.den().clone()).unwrap();
        prop_assert_eq!(&again, &a);
        let k = k.num().clone();
        let scaled = Rde::new(a.num().mul(&k), a.den().mul(&k)).unwrap();
        prop_assert_eq!(scaled, a);
    }

    #[test]
    fn sqrt_ext_grading(a in nonzero(vec![Var::z()]), x in rde(vec![Var::z()]), y in rde(vec![Var::z()])) {
        let ctx = SqrtCtx::new(&a, ORDER).unwrap();
        let (ox, oy) = (SqrtExt::odd_part(&ctx, x.clone()), SqrtExt::odd_part(&ctx, y.clone()));
        let prod = ox.mul(&oy);
        prop_assert!(prod.odd().is_zero());
        prop_assert_eq!(prod.even(), &x.mul(&y).mul(&a.scale(2)));
        let ex = SqrtExt::even_part(&ctx, x.clone());
        prop_assert!(ex.mul(&oy).even().is_zero());
        let q = Frame::q();
        prop_assert!(ex.derive(&q).unwrap().even().is_zero());
        prop_assert!(ox.derive(&q).unwrap().odd().is_zero());
        prop_assert!(ox.derive(&Frame::z()).is_err());
    }

    #[test]
    fn apply_respects_composition(p in op(2), q in op(2), u in rde(z_vars())) {
        let lhs = p.compose(&q).unwrap().apply(&u).unwrap();
        let rhs = p.apply(&q.apply(&u).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn transpose_anti_homomorphism(p in op(2), q in op(2)) {
        let lhs = p.compose(&q).unwrap().transpose().unwrap();
        let rhs = q.transpose().unwrap().compose(&p.transpose().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(p.transpose().unwrap().transpose().unwrap(), p);
    }

    #[test]
    fn compose_associative(p in op(2), q in op(1), r in op(2)) {
        let lhs = p.compose(&q).unwrap().compose(&r).unwrap();
        let rhs = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Pulling back under `Λ₁` and then `Λ₂` is the pullback under `Λ₁Λ₂`
    /// with `φ = Λ·(1, w, f)`.
    #[test]
    fn pullback_functorial(p in op(2), seed in any::<u64>()) {
        let mut rng = InstanceRng::new(seed);
        let (l1, l2) = (rng.gl3(2), rng.gl3(2));
        let t1 = FrameTriple::linear(l1.matrix(), ORDER).unwrap();
        let t2 = FrameTriple::linear(l2.matrix(), ORDER).unwrap();
        let stepwise = pullback(&op_w_to_z(&pullback(&p, &t1).unwrap(), ORDER).unwrap(), &t2).unwrap();
        let t12 = FrameTriple::linear(&l1.matrix().mul(l2.matrix()), ORDER).unwrap();
        prop_assert_eq!(stepwise, pullback(&p, &t12).unwrap());
    }

    #[test]
    fn derivative_conversions_match_direct(seed in any::<u64>(), c in prop::collection::vec(-3i64..=3, 9)) {
        let w = v(Var::w());
        let concrete = [Rde::int(c[0]).add(&w), Rde::int(c[1]).add(&w.pow(2)).add(&Rde::int(c[2]).mul(&w)), w.pow(3).add(&Rde::int(c[3]))];
        let triples = [
            FrameTriple::formal(ORDER).unwrap(),
            FrameTriple::linear(gl3(seed).matrix(), ORDER).unwrap(),
            FrameTriple::new(Frame::w(), concrete).unwrap(),
        ];
        for t in triples {
            let d = |x: &Rde| t.derive(x).unwrap();
            let (z, f) = (t.z_of_w(), t.f_of_w());
            let dc = t.derivative_conversions().unwrap();
            prop_assert_eq!(&dc.dz, &d(&z));
            prop_assert_eq!(&dc.d2z, &d(&d(&z)));
            prop_assert_eq!(&dc.d3z, &d(&d(&d(&z))));
            prop_assert_eq!(&dc.df, &d(&f));
            prop_assert_eq!(&dc.d2f, &d(&d(&f)));
            prop_assert_eq!(&dc.d3f, &d(&d(&d(&f))));
            let inv = d(&z).inv().unwrap();
            let fp = d(&f).mul(&inv);
            let fpp = d(&fp).mul(&inv);
            let fppp = d(&fpp).mul(&inv);
            let cq = t.chain_quantities().unwrap();
            prop_assert_eq!(&cq.fp, &fp);
            prop_assert_eq!(&cq.fpp, &fpp);
            prop_assert_eq!(&cq.fppp, &fppp);
            prop_assert_eq!(&cq.zfp_minus_f, &z.mul(&fp).sub(&f));
        }
    }

    /// The transformed supercharge kills `φᵢ` and nothing with a `w²` term.
    #[test]
    fn supercharge_kernel_is_the_frame(seed in any::<u64>(), noise in poly(vec![Var::w()]), c in 1i64..=4) {
        let lambda = gl3(seed);
        let w = v(Var::w());
        let phi: [Rde; 3] = lambda.matrix().mul_vec(&[Rde::one(), w.clone(), w.pow(3)]).try_into().unwrap();
        let t = FrameTriple::new(Frame::w(), phi.clone()).unwrap();
        let p = t.transformed_supercharge_minus(None).unwrap().bare();
        for x in &phi {
            prop_assert!(p.apply(x).unwrap().is_zero());
        }
        let outside = w.pow(2).scale(c).add(&noise.mul(&w.pow(4)));
        prop_assert!(!p.apply(&outside).unwrap().is_zero());
        let formal = FrameTriple::formal(ORDER).unwrap();
        let pf = formal.transformed_supercharge_minus(None).unwrap().bare();
        for x in formal.phis() {
            prop_assert!(pf.apply(&x).unwrap().is_zero());
        }
    }

    #[test]
    fn wronskian_closed_form_on_linear_frames(seed in any::<u64>()) {
        let lambda = gl3(seed);
        let t = FrameTriple::linear(lambda.matrix(), ORDER).unwrap();
        let expect = lambda.det().mul(t.phi(1)).mul(&v(Var::f(2)));
        prop_assert_eq!(t.w31_21().unwrap(), expect);
        prop_assert!(verify_f3(&lambda, ORDER).passed);
    }

    #[test]
    fn adjoint_is_a_right_action(seed in any::<u64>()) {
        let mut rng = InstanceRng::new(seed);
        let (om, l1, l2) = (rng.omega(5), rng.gl3(3), rng.gl3(3));
        prop_assert!(verify_adjoint_action(&om, &l1, &l2).passed);
        let hat = adjoint_transform(&om, &l1);
        prop_assert_eq!(hat.matrix().det(), om.matrix().det());
        prop_assert_eq!(hat.matrix().trace(), om.matrix().trace());
        prop_assert_eq!(hat.matrix().principal_minor_sum(), om.matrix().principal_minor_sum());
    }

    #[test]
    fn constructed_systems_preserve_their_sector(seed in any::<u64>()) {
        let mut rng = InstanceRng::new(seed);
        let om = rng.omega(5);
        for (name, fs) in standard_fspecs() {
            let sys = TypeBSystem::build(om.clone(), fs, ORDER).unwrap();
            prop_assert!(sys.verify_preservation().passed, "preservation, f = {}", name);
            prop_assert!(sys.verify_kernels().passed, "kernels, f = {}", name);
        }
    }

    #[test]
    fn conditions_on_concrete_systems(seed in any::<u64>()) {
        let mut rng = InstanceRng::new(seed);
        let om = rng.omega(3);
        for (name, fs) in standard_fspecs().into_iter().filter(|(_, f)| !f.is_formal()) {
            let sys = TypeBSystem::build(om.clone(), fs, ORDER).unwrap();
            if sys.a.is_zero() {
                continue;
            }
            let c = sys.verify_conditions();
            prop_assert!(c.passed, "f = {}: {:?}", name, c.residual);
        }
    }

    #[test]
    fn factor_shifts_cancel(seed in any::<u64>()) {
        let t = FrameTriple::linear(gl3(seed).matrix(), ORDER).unwrap();
        prop_assert!(verify_factor_shifts(&t).passed);
    }

    #[test]
    fn invariants_under_random_frames(seed in any::<u64>()) {
        prop_assert!(verify_invariants(&gl3(seed), ORDER).passed);
    }

    #[test]
    fn invariants_under_gl2_frames(seed in any::<u64>()) {
        let m = InstanceRng::new(seed).mobius(3);
        let lambda = gl2_embedding(&m).unwrap();
        prop_assert!(verify_invariants(&lambda, ORDER).passed);
        prop_assert_eq!(&gln_embedding(3, &m).unwrap(), lambda.matrix());
    }

    #[test]
    fn gln_embedding_multiplicative(seed in any::<u64>()) {
        let mut rng = InstanceRng::new(seed);
        let pairs: Vec<_> = (0..3).map(|_| (rng.mobius(4), rng.mobius(4))).collect();
        prop_assert!(verify_gln_multiplicativity(&[2, 3, 4, 5], &pairs).passed);
    }
}

#[test]
fn matrix_route_equals_scalar_route_symbolically() {
    let om = OmegaMatrix::symbolic();
    assert_eq!(matrix_form_abc(&om, Location::Z).unwrap(), abc_expanded(&om).unwrap());
}

#[test]
fn pullback_order_is_not_reversed() {
    let p = Op::new(Frame::z(), vec![v(Var::f(0)), v(Var::z()), Rde::one()]);
    let l1 = GL3Matrix::from_ints([[1, 1, 0], [0, 1, 0], [0, 2, 1]]).unwrap();
    let l2 = GL3Matrix::from_ints([[1, 0, 0], [1, 1, 0], [0, 0, 2]]).unwrap();
    let step = |p: &Op, l: &GL3Matrix| pullback(p, &FrameTriple::linear(l.matrix(), ORDER).unwrap()).unwrap();
    let stepwise = step(&op_w_to_z(&step(&p, &l1), ORDER).unwrap(), &l2);
    let reversed = GL3Matrix::new(l2.matrix().mul(l1.matrix())).unwrap();
    assert_ne!(stepwise, step(&p, &reversed));
}

#[test]
fn degenerate_f_rejected() {
    let f = FSpec::Concrete(v(Var::z()).add(&Rde::one()));
    assert!(TypeBSystem::build(OmegaMatrix::identity(), f, ORDER).is_err());
}
