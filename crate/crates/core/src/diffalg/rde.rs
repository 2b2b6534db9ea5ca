//! Rational differential expressions: quotients of integer polynomials in
//! canonical form.
//!
//! Invariants: `gcd(num, den) = 1` over ℤ (integer content included), the
//! leading coefficient of `den` is positive, and zero is `0/1`. Because ℤ[x] is
//! a unique factorization domain these make the representation unique, so
//! structural equality coincides with equality of rational functions.

use super::gcd::gcd;
use super::int::Int;
use super::poly::{mul_mod, pow_mod, Poly};
use super::frame::Frame;
use super::var::Var;
use crate::error::{KernelError, Result};
use num_rational::BigRational;
use rustc_hash::FxHashMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rde {
    num: Arc<Poly>,
    den: Arc<Poly>,
}

impl Rde {
    /// Normalizes `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Rde> {
        if den.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Rde::zero());
        }
        let (num, den) = if den.is_one() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        Ok(Rde::signed(num, den))
    }

    /// Assumes `num` and `den` are coprime.
    fn signed(num: Poly, den: Poly) -> Rde {
        super::stats::record_terms(num.len() + den.len());
        if den.lc().is_negative() {
            Rde { num: Arc::new(num.neg()), den: Arc::new(den.neg()) }
        } else {
            Rde { num: Arc::new(num), den: Arc::new(den) }
        }
    }

    pub fn zero() -> Rde {
        Rde::from_poly(Poly::zero())
    }

    pub fn one() -> Rde {
        Rde::from_poly(Poly::one())
    }

    pub fn int(c: i64) -> Rde {
        Rde::from_poly(Poly::int(c))
    }

    pub fn from_int(c: Int) -> Rde {
        Rde::from_poly(Poly::constant(c))
    }

    /// `p / q` for integers; panics on `q = 0`.
    pub fn ratio(p: i64, q: i64) -> Rde {
        Rde::new(Poly::int(p), Poly::int(q)).expect("nonzero denominator")
    }

    pub fn from_rational(r: &BigRational) -> Rde {
        Rde::new(Poly::constant(Int::from(r.numer())), Poly::constant(Int::from(r.denom())))
            .expect("rational denominators are nonzero")
    }

    pub fn var(v: Var) -> Rde {
        Rde::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Rde {
        super::stats::record_terms(p.len() + 1);
        Rde { num: Arc::new(p), den: Arc::new(Poly::one()) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `(p, q)` when the value is the rational constant `p/q`.
    pub fn constant_value(&self) -> Option<(Int, Int)> {
        Some((self.num.constant_value()?, self.den.constant_value()?))
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        let (p, q) = self.constant_value()?;
        Some(BigRational::new(p.to_big(), q.to_big()))
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Total number of stored terms, a size measure.
    pub fn term_count(&self) -> usize {
        self.num.len() + self.den.len()
    }

    pub fn neg(&self) -> Rde {
        Rde { num: Arc::new(self.num.neg()), den: self.den.clone() }
    }

    pub fn add(&self, other: &Rde) -> Rde {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, c, d) = (&*self.num, &*self.den, &*other.num, &*other.den);
        if b == d {
            let t = a.add(c);
            return Rde::new(t, b.clone()).expect("nonzero denominator");
        }
        let g = gcd(b, d);
        if g.is_one() {
            // Coprime denominators give a reduced sum.
            let t = a.mul(d).add(&c.mul(b));
            if t.is_zero() {
                return Rde::zero();
            }
            return Rde::signed(t, b.mul(d));
        }
        let b1 = b.div_exact(&g).expect("gcd divides");
        let d1 = d.div_exact(&g).expect("gcd divides");
        let t = a.mul(&d1).add(&c.mul(&b1));
        if t.is_zero() {
            return Rde::zero();
        }
        let h = gcd(&t, &g);
        let num = t.div_exact(&h).expect("gcd divides");
        let den = b1.mul(&d.div_exact(&h).expect("gcd divides"));
        Rde::signed(num, den)
    }

    pub fn sub(&self, other: &Rde) -> Rde {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Rde) -> Rde {
        if self.is_zero() || other.is_zero() {
            return Rde::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let (a, b, c, d) = (&*self.num, &*self.den, &*other.num, &*other.den);
        let (a1, d1) = cancel(a, d);
        let (c1, b1) = cancel(c, b);
        Rde::signed(a1.mul(&c1), b1.mul(&d1))
    }

    pub fn scale(&self, c: i64) -> Rde {
        self.mul(&Rde::int(c))
    }

    pub fn inv(&self) -> Result<Rde> {
        if self.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        Ok(Rde::signed((*self.den).clone(), (*self.num).clone()))
    }

    pub fn div(&self, other: &Rde) -> Result<Rde> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Rde {
        // Powers of coprime polynomials stay coprime.
        Rde::signed(self.num.pow(e), self.den.pow(e))
    }

    pub fn powi(&self, e: i32) -> Result<Rde> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            self.inv().map(|x| x.pow(e.unsigned_abs()))
        }
    }

    /// Exact equality. A modular evaluation can only short-circuit a negative
    /// verdict; a positive verdict always comes from the cross-multiplied
    /// polynomial identity.
    pub fn equal(&self, other: &Rde) -> bool {
        if self == other {
            return true;
        }
        for seed in 0..3u64 {
            let point = |v: Var| fast_point(v, seed);
            if let (Some(x), Some(y)) = (self.eval_mod(MOD_P, &point), other.eval_mod(MOD_P, &point)) {
                if x != y {
                    return false;
                }
            }
        }
        self.num.mul(&other.den).sub(&other.num.mul(&self.den)).is_zero()
    }

    /// Value modulo a prime, or `None` if the denominator vanishes there.
    pub fn eval_mod(&self, p: u64, point: &dyn Fn(Var) -> u64) -> Option<u64> {
        let n = self.num.eval_mod(p, point);
        let d = self.den.eval_mod(p, point);
        if d == 0 {
            return None;
        }
        Some(mul_mod(n, pow_mod(d, p - 2, p), p))
    }

    /// Replaces each variable for which `map` returns a value. One common
    /// denominator is built per substituted variable, so only a single
    /// normalization happens per polynomial.
    pub fn substitute(&self, map: &dyn Fn(Var) -> Option<Rde>) -> Result<Rde> {
        let mut table: FxHashMap<Var, Rde> = FxHashMap::default();
        for v in self.vars() {
            if let Some(r) = map(v) {
                table.insert(v, r);
            }
        }
        if table.is_empty() {
            return Ok(self.clone());
        }
        let n = substitute_poly(&self.num, &table);
        let d = substitute_poly(&self.den, &table);
        n.div(&d).map_err(|_| KernelError::Substitution("denominator vanishes after substitution".into()))
    }

    /// Replaces every jet `f⁽ᵏ⁾` by the `k`-th derivative of `target` with
    /// respect to the base of `frame`.
    pub fn substitute_f(&self, target: &Rde, frame: &Frame) -> Result<Rde> {
        let base = frame.base();
        if target.vars().iter().any(|v| *v != base && !v.is_param()) {
            return Err(KernelError::Substitution(format!(
                "target {target} is not a function of {base} alone"
            )));
        }
        let max_k = self
            .vars()
            .iter()
            .filter_map(|v| match v.as_jet() {
                Some((super::var::Func::F, k)) => Some(k),
                _ => None,
            })
            .max();
        let Some(max_k) = max_k else {
            return Ok(self.clone());
        };
        let unbounded = frame.with_max_order(u8::MAX);
        let mut derivs = vec![target.clone()];
        for _ in 0..max_k {
            let next = unbounded.derive(derivs.last().unwrap())?;
            derivs.push(next);
        }
        self.substitute(&|v| match v.as_jet() {
            Some((super::var::Func::F, k)) => Some(derivs[k as usize].clone()),
            _ => None,
        })
    }

    /// Applies a bijective renaming of variables.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Rde {
        Rde::signed(self.num.rename(&f), self.den.rename(&f))
    }

    pub fn latex(&self) -> String {
        if self.den.is_one() {
            return self.num.latex();
        }
        format!("\\frac{{{}}}{{{}}}", self.num.latex(), self.den.latex())
    }
}

const MOD_P: u64 = (1 << 61) - 1;

fn fast_point(v: Var, seed: u64) -> u64 {
    let mut x = (v.key() as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ seed.wrapping_mul(0xd1b5_4a32_d192_ed03);
    x ^= x >> 29;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 32;
    1 + x % (MOD_P - 1)
}

/// Removes the common factor of `x` and `y`.
fn cancel(x: &Poly, y: &Poly) -> (Poly, Poly) {
    if y.is_one() || x.is_one() {
        return (x.clone(), y.clone());
    }
    let g = gcd(x, y);
    if g.is_one() {
        (x.clone(), y.clone())
    } else {
        (x.div_exact(&g).expect("gcd divides"), y.div_exact(&g).expect("gcd divides"))
    }
}

/// `p` with substitutions applied, returned as a normalized quotient.
///
/// Denominators of the substituted values are split over a common base so
/// that each partial sum carries only the powers it needs; multiplying the
/// raw denominators together instead inflates the numerator by every factor
/// the values share.
fn substitute_poly(p: &Poly, table: &FxHashMap<Var, Rde>) -> Rde {
    let vars: Vec<Var> = p.vars().into_iter().filter(|v| table.contains_key(v)).collect();
    if vars.is_empty() {
        return Rde::from_poly(p.clone());
    }
    let base = DenBase::new(vars.iter().map(|v| table[v].den()));
    let degrees: Vec<u32> = vars.iter().map(|v| p.degree_in(*v)).collect();
    let mut num_powers: Vec<Vec<Poly>> = Vec::new();
    for (v, &e) in vars.iter().zip(&degrees) {
        let r = &table[v];
        let mut np = vec![Poly::one()];
        for k in 1..=e as usize {
            np.push(np[k - 1].mul(r.num()));
        }
        num_powers.push(np);
    }
    let mut cache = PowerCache::new(&base.factors);
    let (num, exps) = horner(p, &vars, &num_powers, &base, &mut cache, 0);
    let den = cache.product(&exps, &vec![0; exps.len()]);
    Rde::new(num, den).expect("substituted denominators are nonzero")
}

/// Factorizations `dᵥ = Π bⱼ^mᵥⱼ` over a pairwise coprime base.
struct DenBase {
    factors: Vec<Poly>,
    /// `exps[v][j]`, indexed like the substituted variables.
    exps: Vec<Vec<u32>>,
}

impl DenBase {
    fn new<'a>(dens: impl Iterator<Item = &'a Poly>) -> DenBase {
        let split: Vec<(Int, Poly)> = dens.map(|d| d.primitive_split()).collect();
        let mut factors: Vec<Poly> = split.iter().filter(|(_, p)| !p.is_constant()).map(|(_, p)| p.clone()).collect();
        refine(&mut factors);
        let mut exps: Vec<Vec<u32>> = split
            .iter()
            .map(|(_, prim)| {
                let mut rest = prim.clone();
                let mut e = vec![0u32; factors.len()];
                for (j, b) in factors.iter().enumerate() {
                    while let Some(q) = rest.div_exact(b) {
                        rest = q;
                        e[j] += 1;
                    }
                }
                assert!(rest.is_one(), "coprime base generates every denominator");
                e
            })
            .collect();
        // Integer contents stay private to their variable.
        for (v, (c, _)) in split.iter().enumerate() {
            if !c.is_one() {
                factors.push(Poly::constant(c.clone()));
                for (u, e) in exps.iter_mut().enumerate() {
                    e.push(u32::from(u == v));
                }
            }
        }
        DenBase { factors, exps }
    }
}

/// Replaces `set` by a pairwise coprime base generating the same products.
fn refine(set: &mut Vec<Poly>) {
    set.sort_by(|a, b| a.terms().cmp(b.terms()));
    set.dedup();
    'outer: loop {
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let g = gcd(&set[i], &set[j]);
                if g.is_constant() {
                    continue;
                }
                let x = set[i].div_exact(&g).expect("gcd divides");
                let y = set[j].div_exact(&g).expect("gcd divides");
                set.remove(j);
                set.remove(i);
                for p in [g, x, y] {
                    let p = if p.lc().is_negative() { p.neg() } else { p };
                    if !p.is_constant() && !set.contains(&p) {
                        set.push(p);
                    }
                }
                continue 'outer;
            }
        }
        break;
    }
}

struct PowerCache<'a> {
    factors: &'a [Poly],
    powers: Vec<Vec<Poly>>,
}

impl<'a> PowerCache<'a> {
    fn new(factors: &'a [Poly]) -> Self {
        PowerCache { factors, powers: factors.iter().map(|_| vec![Poly::one()]).collect() }
    }

    fn pow(&mut self, j: usize, e: u32) -> &Poly {
        let list = &mut self.powers[j];
        while list.len() <= e as usize {
            let next = list.last().unwrap().mul(&self.factors[j]);
            list.push(next);
        }
        &list[e as usize]
    }

    /// `Π bⱼ^(top − low)`.
    fn product(&mut self, top: &[u32], low: &[u32]) -> Poly {
        let mut acc = Poly::one();
        for j in 0..top.len() {
            if top[j] > low[j] {
                acc = acc.mul(&self.pow(j, top[j] - low[j]).clone());
            }
        }
        acc
    }
}

/// Returns `(n, t)` with `p = n / Π bⱼ^tⱼ` after substituting `vars[i..]`.
fn horner(
    p: &Poly,
    vars: &[Var],
    num_powers: &[Vec<Poly>],
    base: &DenBase,
    cache: &mut PowerCache,
    i: usize,
) -> (Poly, Vec<u32>) {
    let width = base.factors.len();
    if i == vars.len() || p.is_zero() {
        return (p.clone(), vec![0; width]);
    }
    let coeffs = p.to_univariate(vars[i]);
    let mut parts: Vec<(usize, Poly, Vec<u32>)> = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (inner, mut t) = horner(c, vars, num_powers, base, cache, i + 1);
        for (tj, mj) in t.iter_mut().zip(&base.exps[i]) {
            *tj += mj * k as u32;
        }
        parts.push((k, inner, t));
    }
    let mut top = vec![0u32; width];
    for (_, _, t) in &parts {
        for (a, b) in top.iter_mut().zip(t) {
            *a = (*a).max(*b);
        }
    }
    let mut acc = Poly::zero();
    for (k, inner, t) in parts {
        let lift = cache.product(&top, &t);
        acc = acc.add(&inner.mul(&num_powers[i][k]).mul(&lift));
    }
    (acc, top)
}

impl fmt::Display for Rde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| if p.len() > 1 { format!("({p})") } else { p.to_string() };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for Rde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::var::Func;

    fn z() -> Rde {
        Rde::var(Var::z())
    }
    fn f(k: u8) -> Rde {
        Rde::var(Var::f(k))
    }

    #[test]
    fn normalize_examples() {
        let zp = Poly::var(Var::z());
        let r = Rde::new(zp.mul(&zp).sub(&Poly::one()), zp.sub(&Poly::one())).unwrap();
        assert_eq!(r, z().add(&Rde::one()));
        assert!(Rde::new(Poly::zero(), Poly::var(Var::f(2))).unwrap().is_zero());
        let f2 = Poly::var(Var::f(2));
        let r = Rde::new(zp.mul(&f2).neg(), f2.neg()).unwrap();
        assert_eq!(r, z());
        assert_eq!(Rde::new(Poly::one(), Poly::zero()), Err(KernelError::DivisionByZero));
    }

    #[test]
    fn denominator_sign_is_positive() {
        let r = Rde::one().div(&z().neg()).unwrap();
        assert!(!r.den().lc().is_negative());
        assert_eq!(r.num(), &Poly::int(-1));
    }

    #[test]
    fn henrici_sum_reduces() {
        let a = Rde::one().div(&z().sub(&Rde::one())).unwrap();
        let b = Rde::one().div(&z().add(&Rde::one())).unwrap();
        let s = a.sub(&b);
        let expect = Rde::int(2).div(&z().mul(&z()).sub(&Rde::one())).unwrap();
        assert_eq!(s, expect);
        let x = f(1).div(&z()).unwrap();
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn equality_contract() {
        let r = Rde::new(
            Poly::var(Var::z()).pow(2).sub(&Poly::one()),
            Poly::var(Var::z()).sub(&Poly::one()),
        )
        .unwrap();
        assert!(r.equal(&z().add(&Rde::one())));
        assert!(!f(1).equal(&f(2)));
    }

    #[test]
    fn substitute_f_examples() {
        let zf = Frame::z();
        let z2 = z().mul(&z());
        assert_eq!(f(2).substitute_f(&z2, &zf).unwrap(), Rde::int(2));
        let z3 = z2.mul(&z());
        let x = f(3).div(&f(2)).unwrap();
        assert_eq!(x.substitute_f(&z3, &zf).unwrap(), Rde::one().div(&z()).unwrap());
        let y = z().mul(&f(1)).sub(&f(0));
        assert_eq!(y.substitute_f(&z2, &zf).unwrap(), z2);
        assert!(f(0).substitute_f(&Rde::var(Var::f(1)), &zf).is_err());
    }

    #[test]
    fn substitution_with_denominators() {
        let phi1 = Rde::var(Var::jet(Func::Phi(1), 0));
        let phi2 = Rde::var(Var::jet(Func::Phi(2), 0));
        let ratio = phi2.div(&phi1).unwrap();
        let expr = z().mul(&z()).add(&z());
        let got = expr.substitute(&|v| (v == Var::z()).then(|| ratio.clone())).unwrap();
        let expect = ratio.mul(&ratio).add(&ratio);
        assert_eq!(got, expect);
    }

    #[test]
    fn substitution_with_shared_denominators() {
        let p1 = Rde::var(Var::jet(Func::Phi(1), 0));
        let p2 = Rde::var(Var::jet(Func::Phi(2), 0));
        let base = p1.mul(&p2).add(&Rde::int(1));
        let zv = p2.div(&base.mul(&Rde::int(3))).unwrap();
        let fv = p1.div(&base.mul(&base).mul(&p1.sub(&p2))).unwrap();
        let expr = z().mul(&f(0)).sub(&z().mul(&z())).add(&f(0).div(&z().add(&Rde::one())).unwrap());
        let got = expr
            .substitute(&|v| {
                if v == Var::z() {
                    Some(zv.clone())
                } else if v == Var::f(0) {
                    Some(fv.clone())
                } else {
                    None
                }
            })
            .unwrap();
        let expect = zv.mul(&fv).sub(&zv.mul(&zv)).add(&fv.div(&zv.add(&Rde::one())).unwrap());
        assert_eq!(got, expect);
    }
}
