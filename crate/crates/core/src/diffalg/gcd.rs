//! Multivariate polynomial gcd over the integers.
//!
//! The strategy is recursive content/primitive-part reduction. Before any
//! pseudo-remainder sequence is run, modular images bound the degree of the
//! gcd in every variable; a zero bound is a certificate that the gcd does not
//! involve that variable, which lets most calls reduce to contents or finish
//! immediately. The remaining hard cases fall back to a subresultant sequence
//! in a single main variable.

use super::poly::{add_mod, mul_mod, pow_mod, Poly};
use super::var::Var;
use rustc_hash::FxHashMap;

/// 2⁶¹ − 1.
const PRIME: u64 = (1 << 61) - 1;

/// Greatest common divisor with a positive leading coefficient; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return positive(b);
    }
    if b.is_zero() {
        return positive(a);
    }
    let ca = a.int_content();
    let cb = b.int_content();
    let ic = ca.gcd(&cb);
    if a.is_constant() || b.is_constant() {
        return Poly::constant(ic);
    }
    let ma = a.mono_content();
    let mb = b.mono_content();
    let mc = ma.gcd(&mb);
    let a1 = a.div_mono(&ma).and_then(|p| p.div_int(&ca)).expect("content divides");
    let b1 = b.div_mono(&mb).and_then(|p| p.div_int(&cb)).expect("content divides");
    let g = if a1.is_constant() || b1.is_constant() {
        Poly::one()
    } else {
        gcd_primitive(&a1, &b1)
    };
    positive(&g.mul_term(&mc, &ic))
}

/// Gcd of a list, stopping early once the result is a unit.
pub fn gcd_many(polys: &[Poly]) -> Poly {
    let mut sorted: Vec<&Poly> = polys.iter().filter(|p| !p.is_zero()).collect();
    sorted.sort_by_key(|p| p.len());
    let mut it = sorted.into_iter();
    let Some(first) = it.next() else {
        return Poly::zero();
    };
    let mut g = positive(first);
    for p in it {
        if g.is_one() {
            break;
        }
        g = gcd(&g, p);
    }
    g
}

fn positive(p: &Poly) -> Poly {
    if p.lc().is_negative() {
        p.neg()
    } else {
        p.clone()
    }
}

/// Both inputs are primitive, free of monomial content and non-constant.
fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a == b {
        return positive(a);
    }
    let va = a.vars();
    let vb = b.vars();
    let exclusive: Vec<Var> = sym_diff(&va, &vb);
    if !exclusive.is_empty() {
        return content_gcd(a, b, &exclusive);
    }
    let vars = va;
    let bounds = degree_bounds(a, b, &vars);
    let support: Vec<Var> = vars.iter().zip(&bounds).filter(|(_, d)| **d > 0).map(|(v, _)| *v).collect();
    if support.is_empty() {
        return Poly::one();
    }
    if support.len() < vars.len() {
        let outside: Vec<Var> = vars.iter().copied().filter(|v| !support.contains(v)).collect();
        return content_gcd(a, b, &outside);
    }
    // Trial division by whichever input already meets every degree bound.
    for (cand, other) in [(b, a), (a, b)] {
        let fits = vars.iter().zip(&bounds).all(|(v, d)| cand.degree_in(*v) == *d);
        if fits && other.div_exact(cand).is_some() {
            return positive(cand);
        }
    }
    let main = vars
        .iter()
        .zip(&bounds)
        .min_by_key(|(v, d)| (**d, a.degree_in(**v).max(b.degree_in(**v))))
        .map(|(v, _)| *v)
        .unwrap();
    subresultant_gcd(a, b, main)
}

fn sym_diff(a: &[Var], b: &[Var]) -> Vec<Var> {
    let mut out: Vec<Var> = a.iter().filter(|v| b.binary_search(v).is_err()).copied().collect();
    out.extend(b.iter().filter(|v| a.binary_search(v).is_err()));
    out.sort_unstable();
    out
}

/// The gcd cannot involve `vars`, so it is the gcd of all coefficients with
/// respect to them.
fn content_gcd(a: &Poly, b: &Poly, vars: &[Var]) -> Poly {
    let mut coeffs = a.coefficients_in(vars);
    coeffs.extend(b.coefficients_in(vars));
    gcd_many(&coeffs)
}

/// Upper bounds for `deg_v gcd(a, b)` from univariate images modulo a prime.
fn degree_bounds(a: &Poly, b: &Poly, vars: &[Var]) -> Vec<u32> {
    let mut bounds: Vec<u32> = vars.iter().map(|v| a.degree_in(*v).min(b.degree_in(*v))).collect();
    let mut pending: Vec<usize> = (0..vars.len()).collect();
    for attempt in 0..3u64 {
        if pending.is_empty() {
            break;
        }
        let point = |v: Var| 1 + splitmix(v.key() as u64 ^ (attempt << 40) ^ 0x5eed) % (PRIME - 1);
        let ia = images(a, vars, &point);
        let ib = images(b, vars, &point);
        pending.retain(|&i| {
            let (ua, ub) = (&ia[i], &ib[i]);
            // A vanishing leading coefficient invalidates the bound.
            if ua.last().copied().unwrap_or(0) == 0 || ub.last().copied().unwrap_or(0) == 0 {
                return true;
            }
            let d = uni_gcd_degree(ua.clone(), ub.clone());
            bounds[i] = bounds[i].min(d);
            false
        });
    }
    bounds
}

/// For each variable `v`, the dense univariate image of `p` in `v` with every
/// other variable evaluated at `point`.
fn images(p: &Poly, vars: &[Var], point: &dyn Fn(Var) -> u64) -> Vec<Vec<u64>> {
    let mut values: FxHashMap<Var, (u64, u64)> = FxHashMap::default();
    for v in p.vars() {
        let x = point(v);
        values.insert(v, (x, pow_mod(x, PRIME - 2, PRIME)));
    }
    let mut out: Vec<Vec<u64>> = vars.iter().map(|v| vec![0u64; p.degree_in(*v) as usize + 1]).collect();
    let index: FxHashMap<Var, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut total = 0u64;
    for (m, c) in p.terms() {
        let mut full = c.rem_u64(PRIME);
        for &(v, e) in m.factors() {
            full = mul_mod(full, pow_mod(values[&v].0, e as u64, PRIME), PRIME);
        }
        total = add_mod(total, full, PRIME);
        for &(v, e) in m.factors() {
            if let Some(&i) = index.get(&v) {
                let without = mul_mod(full, pow_mod(values[&v].1, e as u64, PRIME), PRIME);
                let slot = &mut out[i];
                slot[0] = add_mod(slot[0], PRIME - full, PRIME);
                slot[e as usize] = add_mod(slot[e as usize], without, PRIME);
            }
        }
    }
    for slot in &mut out {
        slot[0] = add_mod(slot[0], total, PRIME);
    }
    out
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn uni_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> u32 {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), PRIME - 2, PRIME);
        while a.len() >= b.len() {
            let q = mul_mod(*a.last().unwrap(), inv, PRIME);
            let shift = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                let t = mul_mod(q, *bc, PRIME);
                a[i + shift] = add_mod(a[i + shift], PRIME - t, PRIME);
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    (a.len() as u32).saturating_sub(1)
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

type Uni = Vec<Poly>;

fn uni_trim(p: &mut Uni) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn uni_content(p: &Uni) -> Poly {
    gcd_many(p)
}

fn uni_div(p: &Uni, c: &Poly) -> Uni {
    p.iter().map(|x| x.div_exact(c).expect("content divides")).collect()
}

/// Pseudo-remainder `lc(b)^(deg a − deg b + 1)·a mod b`.
fn prem(a: &Uni, b: &Uni) -> Uni {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut e = a.len() - b.len() + 1;
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for x in r.iter_mut() {
            *x = x.mul(lb);
        }
        for (i, bc) in b.iter().enumerate() {
            let t = bc.mul(&lr);
            r[i + shift] = r[i + shift].sub(&t);
        }
        uni_trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e as u32);
        for x in r.iter_mut() {
            *x = x.mul(&f);
        }
    }
    r
}

fn subresultant_gcd(a: &Poly, b: &Poly, x: Var) -> Poly {
    let mut ua = a.to_univariate(x);
    let mut ub = b.to_univariate(x);
    let ca = uni_content(&ua);
    let cb = uni_content(&ub);
    let c = gcd(&ca, &cb);
    ua = uni_div(&ua, &ca);
    ub = uni_div(&ub, &cb);
    if ua.len() < ub.len() {
        std::mem::swap(&mut ua, &mut ub);
    }
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let delta = (ua.len() - ub.len()) as u32;
        let r = prem(&ua, &ub);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return c;
        }
        let divisor = g.mul(&h.pow(delta));
        ua = ub;
        ub = uni_div(&r, &divisor);
        g = ua.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant division")
        };
    }
    let content = uni_content(&ub);
    let pp = uni_div(&ub, &content);
    positive(&Poly::from_univariate(&pp, x).mul(&c))
}

/// Least common multiple with positive leading coefficient.
pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    positive(&a.div_exact(&g).expect("gcd divides").mul(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::int::Int;
    use crate::diffalg::var::{Func, Var};

    fn v(func: Func, k: u8) -> Poly {
        Poly::var(Var::jet(func, k))
    }

    #[test]
    fn univariate_common_factor() {
        let z = v(Func::Z, 0);
        let a = z.mul(&z).sub(&Poly::one());
        let b = z.sub(&Poly::one()).mul(&z.add(&Poly::int(2)));
        assert_eq!(gcd(&a, &b), z.sub(&Poly::one()));
    }

    #[test]
    fn multivariate_hidden_factor() {
        let z = v(Func::Z, 0);
        let f1 = v(Func::F, 1);
        let f2 = v(Func::F, 2);
        let g = z.mul(&f1).sub(&f2).add(&Poly::int(3));
        let a = g.mul(&z.add(&f2)).scale(&Int::from(6));
        let b = g.mul(&f1.mul(&f1).add(&z)).scale(&Int::from(4));
        assert_eq!(gcd(&a, &b), g.scale(&Int::from(2)));
    }

    #[test]
    fn coprime_inputs() {
        let z = v(Func::Z, 0);
        let f0 = v(Func::F, 0);
        let a = z.mul(&f0).add(&Poly::one());
        let b = z.sub(&f0);
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn squared_factor_needs_prs() {
        let x = v(Func::Z, 0);
        let y = v(Func::F, 0);
        let g = x.mul(&y).add(&x).add(&Poly::one());
        let a = g.pow(2).mul(&x.sub(&y));
        let b = g.mul(&x.add(&y).add(&Poly::int(5))).mul(&g);
        assert_eq!(gcd(&a, &b), g.pow(2));
    }

    #[test]
    fn sign_and_content() {
        let z = v(Func::Z, 0);
        let a = z.scale(&Int::from(-4));
        let b = z.mul(&z).scale(&Int::from(6));
        assert_eq!(gcd(&a, &b), z.scale(&Int::from(2)));
        assert_eq!(lcm(&z, &z.add(&Poly::one())), z.mul(&z.add(&Poly::one())));
    }
}
