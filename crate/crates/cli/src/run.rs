//! Orchestration: instance generation, check dispatch and report assembly.
//! Entries are ordered by the check list, then by instance index.

use crate::config::{CheckKind, LambdaChoice, OmegaChoice, RawConfig, RunConfig};
use nfold::diffalg::{stats, Rde, Scalar, Var};
use nfold::gl3::{
    gl3_frame, superalgebra_constants, tier1_residuals, verify_abc_covariance, verify_adjoint_action, verify_constants,
    verify_f3, verify_invariance_of_constants, verify_invariants, verify_superalgebra, GL3Matrix,
};
use nfold::instances::InstanceRng;
use nfold::report::VerificationCheck;
use nfold::typea::{
    type_a_from_omega, verify_gl2_subgroup, verify_gln_multiplicativity, verify_invariant_reduction,
    verify_transvectants, verify_type_a_limit, verify_type_a_limit_for_omega, MobiusParameters,
};
use nfold::typeb::{verify_factor_shifts, FSpec, OmegaMatrix, QSpaceFunctions, TypeBSystem};
use nfold::KernelError;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Entry bound of random integer instances.
const BOUND: i64 = 5;
const GROUP_BOUND: i64 = 3;

const STREAM_OMEGA: u64 = 1;
const STREAM_LAMBDA: u64 = 2;
const STREAM_ADJOINT: u64 = 3;
const STREAM_TYPE_A: u64 = 4;
const STREAM_MOBIUS: u64 = 5;
const STREAM_MOBIUS_PAIR: u64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    /// Index of the instance the check ran on; absent for one-off checks.
    pub instance: Option<usize>,
    pub status: Status,
    pub residual: Option<String>,
    pub detail: Option<String>,
    pub elapsed_ms: u64,
}

/// LaTeX of a constructed concrete system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemEntry {
    pub instance: usize,
    pub omega: Vec<Vec<String>>,
    /// LaTeX of `f(z)`.
    pub f: String,
    pub a: String,
    pub b: String,
    pub c: String,
    pub h_minus: String,
    pub p3_minus_gauged: String,
    pub v_plus: Option<String>,
    pub v_minus: Option<String>,
    pub p3_minus: Option<String>,
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelStats {
    pub max_jet_order: usize,
    pub peak_terms: usize,
}

/// The configuration as run, after command-line overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveConfig {
    pub input: RawConfig,
    pub checks: Vec<CheckKind>,
    pub seed: u64,
    pub random_trials: u32,
    pub max_jet_order: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: EffectiveConfig,
    pub checks: Vec<CheckEntry>,
    pub systems: Vec<SystemEntry>,
    pub stats: KernelStats,
}

impl Report {
    /// 0 iff every non-skipped check passed.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            1
        } else {
            0
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// The report with every timing field zeroed.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.elapsed_ms = 0;
        }
        r
    }
}

fn rng(seed: u64, stream: u64, i: usize) -> InstanceRng {
    InstanceRng::new(seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (i as u64).wrapping_mul(0xd1b5_4a32_d192_ed03))
}

struct Instances {
    omegas: Vec<OmegaMatrix>,
    concrete_omega: bool,
    /// `Λᵢ`, `None` when the configured Λ is not 3×3.
    lambdas: Vec<Option<GL3Matrix>>,
    lambda_configured: bool,
}

fn instances(cfg: &RunConfig) -> Instances {
    let trials = cfg.random_trials as usize;
    let (omegas, concrete_omega) = match &cfg.omega {
        Some(OmegaChoice::Concrete(m)) => (vec![m.clone()], true),
        Some(OmegaChoice::Symbolic) => (vec![OmegaMatrix::symbolic()], false),
        None => ((0..trials).map(|i| rng(cfg.seed, STREAM_OMEGA, i).omega(BOUND)).collect(), true),
    };
    let lambdas = (0..omegas.len())
        .map(|i| match &cfg.lambda {
            Some(l) => l.gl3(),
            None => Some(rng(cfg.seed, STREAM_LAMBDA, i).gl3(GROUP_BOUND)),
        })
        .collect();
    Instances { omegas, concrete_omega, lambdas, lambda_configured: cfg.lambda.is_some() }
}

fn entry(check: VerificationCheck, name: CheckKind, instance: Option<usize>, start: Instant) -> CheckEntry {
    CheckEntry {
        name: name.name().into(),
        instance,
        status: if check.passed { Status::Pass } else { Status::Fail },
        residual: check.residual,
        detail: check.detail,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

fn skipped(name: CheckKind, instance: Option<usize>, why: &str) -> CheckEntry {
    CheckEntry {
        name: name.name().into(),
        instance,
        status: Status::Skipped,
        residual: None,
        detail: Some(why.into()),
        elapsed_ms: 0,
    }
}

fn errored(name: CheckKind, e: &KernelError, start: Instant) -> VerificationCheck {
    VerificationCheck::errored(name.name(), e, start)
}

fn is_z_squared(f: &FSpec) -> bool {
    matches!(f, FSpec::Concrete(x) if *x == Rde::var(Var::z()).pow(2))
}

/// The odd-sector conditions differentiate a formal `f` up to `f⁽⁷⁾`, one
/// past the default budget; concrete `f` needs no raise.
const FORMAL_CONDITIONS_ORDER: u8 = 7;

fn conditions_order(f: &FSpec, order: u8) -> u8 {
    match f {
        FSpec::Formal => order.max(FORMAL_CONDITIONS_ORDER),
        FSpec::Concrete(_) => order,
    }
}

/// Runs the configured checks with the given jet-order budget.
pub fn run(cfg: &RunConfig, max_jet_order: u8) -> Report {
    stats::reset();
    let inst = instances(cfg);
    let order = max_jet_order;
    let build = |i: usize| TypeBSystem::build(inst.omegas[i].clone(), cfg.f.clone(), order);
    let mut checks = Vec::new();
    for &kind in &cfg.checks {
        let n = inst.omegas.len();
        match kind {
            CheckKind::TypeaLimit if matches!(cfg.f, FSpec::Concrete(_)) && !is_z_squared(&cfg.f) => {
                checks.push(skipped(kind, None, "the type A limit is the f = z² specialization"));
                continue;
            }
            CheckKind::Invariants if inst.lambda_configured => {
                checks.push(run_one(kind, None, || invariants(inst.lambdas[0].as_ref(), order)));
                continue;
            }
            _ => {}
        }
        for i in 0..n {
            let lambda = inst.lambdas[i].as_ref();
            let e = match kind {
                CheckKind::Preservation => run_one(kind, Some(i), || {
                    let sys = build(i)?;
                    let start = Instant::now();
                    Ok(VerificationCheck::all(kind.name(), &[sys.verify_preservation(), sys.verify_kernels()], start))
                }),
                CheckKind::Conditions => match TypeBSystem::build(inst.omegas[i].clone(), cfg.f.clone(), conditions_order(&cfg.f, order)) {
                    Ok(sys) if sys.a.is_zero() => skipped(kind, Some(i), "A ≡ 0: no q-space realization"),
                    built => run_one(kind, Some(i), || Ok(built?.verify_conditions())),
                },
                CheckKind::AbcCovariance => match lambda {
                    None => skipped(kind, Some(i), "Λ is not 3×3"),
                    Some(l) => run_one(kind, Some(i), || Ok(verify_abc_covariance(&inst.omegas[i], l, order))),
                },
                CheckKind::Invariants => run_one(kind, Some(i), || invariants(lambda, order)),
                CheckKind::SuperalgebraTier1 => run_one(kind, Some(i), || {
                    let sys = build(i)?;
                    let start = Instant::now();
                    let r = tier1_residuals(&sys, &superalgebra_constants(&sys.omega))?;
                    Ok(VerificationCheck::from_residuals(kind.name(), &r, start))
                }),
                CheckKind::SuperalgebraTier2 => run_one(kind, Some(i), || Ok(verify_superalgebra(&build(i)?).1)),
                CheckKind::Adjoint => match lambda {
                    None => skipped(kind, Some(i), "Λ is not 3×3"),
                    Some(l) => run_one(kind, Some(i), || {
                        let l2 = rng(cfg.seed, STREAM_ADJOINT, i).gl3(GROUP_BOUND);
                        Ok(verify_adjoint_action(&inst.omegas[i], l, &l2))
                    }),
                },
                CheckKind::ConstantsInvariance => match lambda {
                    None => skipped(kind, Some(i), "Λ is not 3×3"),
                    Some(l) => run_one(kind, Some(i), || {
                        let start = Instant::now();
                        let parts = [
                            verify_invariance_of_constants(&inst.omegas[i], l, false),
                            verify_constants(&inst.omegas[i]),
                        ];
                        Ok(VerificationCheck::all(kind.name(), &parts, start))
                    }),
                },
                CheckKind::TypeaLimit => run_one(kind, Some(i), || {
                    Ok(if cfg.omega.is_some() {
                        verify_type_a_limit_for_omega(&inst.omegas[i], order)
                    } else {
                        verify_type_a_limit(&rng(cfg.seed, STREAM_TYPE_A, i).type_a(BOUND), order)
                    })
                }),
                CheckKind::Transvectants => {
                    run_one(kind, Some(i), || Ok(verify_transvectants(&type_a_from_omega(&inst.omegas[i])?)))
                }
                CheckKind::Embedding => run_one(kind, Some(i), || embedding(cfg, i, order)),
            };
            checks.push(e);
        }
    }
    let systems = if inst.concrete_omega {
        (0..inst.omegas.len()).filter_map(|i| build(i).ok().map(|s| system_entry(i, &s))).collect()
    } else {
        Vec::new()
    };
    let snap = stats::snapshot();
    Report {
        config: EffectiveConfig {
            input: cfg.raw.clone(),
            checks: cfg.checks.clone(),
            seed: cfg.seed,
            random_trials: cfg.random_trials,
            max_jet_order,
        },
        checks,
        systems,
        stats: KernelStats { max_jet_order: snap.max_jet_order, peak_terms: snap.peak_terms },
    }
}

fn run_one(
    kind: CheckKind,
    instance: Option<usize>,
    f: impl FnOnce() -> nfold::Result<VerificationCheck>,
) -> CheckEntry {
    let start = Instant::now();
    let check = f().unwrap_or_else(|e| errored(kind, &e, start));
    entry(check, kind, instance, start)
}

fn invariants(lambda: Option<&GL3Matrix>, order: u8) -> nfold::Result<VerificationCheck> {
    let start = Instant::now();
    let Some(l) = lambda else {
        return Ok(VerificationCheck::new("invariants", true, start).with_detail("Λ is not 3×3"));
    };
    let shifts = verify_factor_shifts(&gl3_frame(l, order)?);
    let parts = [verify_f3(l, order), verify_invariants(l, order), shifts];
    Ok(VerificationCheck::all("invariants", &parts, start))
}

fn embedding(cfg: &RunConfig, i: usize, order: u8) -> nfold::Result<VerificationCheck> {
    let start = Instant::now();
    let (n, m) = cfg
        .lambda
        .as_ref()
        .and_then(LambdaChoice::mobius)
        .unwrap_or_else(|| (3, rng(cfg.seed, STREAM_MOBIUS, i).mobius(GROUP_BOUND)));
    let other: MobiusParameters = rng(cfg.seed, STREAM_MOBIUS_PAIR, i).mobius(GROUP_BOUND);
    let mut ns = vec![2, 3, 4, 5];
    if !ns.contains(&n) {
        ns.push(n);
    }
    let mut parts = vec![verify_gl2_subgroup(&m, order), verify_gln_multiplicativity(&ns, &[(m.clone(), other)])];
    if i == 0 {
        parts.push(verify_invariant_reduction(order));
    }
    Ok(VerificationCheck::all("embedding", &parts, start))
}

fn system_entry(i: usize, sys: &TypeBSystem) -> SystemEntry {
    let omega = sys.omega.matrix().rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    let mut out = SystemEntry {
        instance: i,
        omega,
        f: match &sys.fspec {
            FSpec::Formal => "f(z)".into(),
            FSpec::Concrete(x) => x.latex(),
        },
        a: sys.a.latex(),
        b: sys.b.latex(),
        c: sys.c.latex(),
        h_minus: sys.h_minus.latex(),
        p3_minus_gauged: sys.p3_minus.latex(),
        v_plus: None,
        v_minus: None,
        p3_minus: None,
        note: None,
    };
    if sys.a.is_zero() {
        out.note = Some("A ≡ 0: no q-space realization".into());
        return out;
    }
    match qspace_latex(sys) {
        Ok((vp, vm, p)) => {
            out.v_plus = Some(vp);
            out.v_minus = Some(vm);
            out.p3_minus = Some(p);
        }
        Err(e) => out.note = Some(format!("q-space rendering failed: {e}")),
    }
    out
}

fn qspace_latex(sys: &TypeBSystem) -> nfold::Result<(String, String, String)> {
    let qs = sys.qspace_functions()?;
    let (vp, vm) = potentials_latex(&qs)?;
    Ok((vp, vm, qs.p3_minus()?.latex()))
}

/// `(V⁺, V⁻)` rendered; the zero potential renders as `0`.
pub fn potentials_latex<S: Scalar>(qs: &QSpaceFunctions<S>) -> nfold::Result<(String, String)> {
    let v = qs.potentials()?;
    Ok((v.plus.to_latex(), v.minus.to_latex()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use nfold::diffalg::Frame;

    fn run_json(s: &str) -> Report {
        run(&parse_config(s.as_bytes()).unwrap(), 6)
    }

    #[test]
    fn zero_omega_preserves() {
        let r = run_json(r#"{"omega": [["0","0","0"],["0","0","0"],["0","0","0"]], "f": "z^3", "checks": ["preservation"]}"#);
        assert_eq!(r.checks.len(), 1);
        assert_eq!(r.checks[0].status, Status::Pass);
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.systems[0].note.as_deref(), Some("A ≡ 0: no q-space realization"));
    }

    #[test]
    fn empty_check_list() {
        let r = run_json("{}");
        assert!(r.checks.is_empty());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn zero_potentials_render_as_zero() {
        let qs = QSpaceFunctions { e: Rde::zero(), w: Rde::zero(), f: Rde::zero(), frame: Frame::q() };
        assert_eq!(potentials_latex(&qs).unwrap(), ("0".to_string(), "0".to_string()));
    }

    #[test]
    fn typea_limit_skipped_off_z_squared() {
        let r = run_json(r#"{"f": "z^3", "checks": ["typea-limit"], "random-trials": 1}"#);
        assert_eq!(r.checks[0].status, Status::Skipped);
        assert_eq!(r.exit_code(), 0);
        let r = run_json(r#"{"f": "z^2", "checks": ["typea-limit"], "random-trials": 2}"#);
        assert!(r.checks.iter().all(|c| c.status == Status::Pass));
        assert_eq!(r.checks.len(), 2);
    }

    #[test]
    fn entries_ordered_by_check_then_instance() {
        let r = run_json(r#"{"f": "z^3", "checks": ["adjoint", "preservation"], "random-trials": 2, "seed": 9}"#);
        let order: Vec<(String, Option<usize>)> = r.checks.iter().map(|c| (c.name.clone(), c.instance)).collect();
        let expect = [("adjoint", 0), ("adjoint", 1), ("preservation", 0), ("preservation", 1)];
        assert_eq!(order, expect.map(|(n, i)| (n.to_string(), Some(i))));
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.systems.len(), 2);
    }

    #[test]
    fn gln_lambda_skips_frame_checks() {
        let r = run_json(
            r#"{"f": "z^2", "lambda": {"glN": {"n": 4, "alpha":"1","beta":"1","gamma":"0","delta":"2"}},
                "checks": ["abc-covariance", "embedding"], "random-trials": 1}"#,
        );
        assert_eq!(r.checks[0].status, Status::Skipped);
        assert_eq!(r.checks[1].status, Status::Pass);
    }
}
