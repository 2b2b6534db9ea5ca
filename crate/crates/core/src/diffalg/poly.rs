//! Sparse multivariate polynomials with integer coefficients.
//!
//! Terms are kept sorted in descending degree-lexicographic order with no zero
//! coefficients, so structural equality is polynomial equality. Rational
//! scalars never live here: they are carried by the denominator of a
//! [`Rde`](super::Rde).

use super::int::Int;
use super::var::Var;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono {
    deg: u32,
    factors: SmallVec<[(Var, u32); 4]>,
}

impl Mono {
    pub fn one() -> Mono {
        Mono::default()
    }

    pub fn var(v: Var) -> Mono {
        Mono::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Mono {
        if e == 0 {
            return Mono::one();
        }
        let mut factors = SmallVec::new();
        factors.push((v, e));
        Mono { deg: e, factors }
    }

    pub fn from_factors(mut factors: Vec<(Var, u32)>) -> Mono {
        factors.retain(|f| f.1 > 0);
        factors.sort_by_key(|f| f.0);
        let mut merged: SmallVec<[(Var, u32); 4]> = SmallVec::new();
        for (v, e) in factors {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        let deg = merged.iter().map(|f| f.1).sum();
        Mono { deg, factors: merged }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.factors
            .binary_search_by_key(&v, |f| f.0)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let (a, b) = (&self.factors, &other.factors);
        let mut out: SmallVec<[(Var, u32); 4]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono { deg: self.deg + other.deg, factors: out }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        if other.deg > self.deg {
            return None;
        }
        let mut out: SmallVec<[(Var, u32); 4]> = SmallVec::new();
        let mut j = 0;
        for &(v, e) in &self.factors {
            if j < other.factors.len() && other.factors[j].0 == v {
                let oe = other.factors[j].1;
                if oe > e {
                    return None;
                }
                if e > oe {
                    out.push((v, e - oe));
                }
                j += 1;
            } else if j < other.factors.len() && other.factors[j].0 < v {
                return None;
            } else {
                out.push((v, e));
            }
        }
        if j < other.factors.len() {
            return None;
        }
        Some(Mono { deg: self.deg - other.deg, factors: out })
    }

    /// Componentwise minimum: the monomial gcd.
    pub fn gcd(&self, other: &Mono) -> Mono {
        let mut out: SmallVec<[(Var, u32); 4]> = SmallVec::new();
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1.min(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        let deg = out.iter().map(|f| f.1).sum();
        Mono { deg, factors: out }
    }

    /// Removes `v` entirely, returning its exponent.
    pub fn split_var(&self, v: Var) -> (u32, Mono) {
        match self.factors.binary_search_by_key(&v, |f| f.0) {
            Ok(i) => {
                let e = self.factors[i].1;
                let mut factors = self.factors.clone();
                factors.remove(i);
                (e, Mono { deg: self.deg - e, factors })
            }
            Err(_) => (0, self.clone()),
        }
    }

    /// Applies `f` to every variable; exponents are preserved.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Mono {
        Mono::from_factors(self.factors.iter().map(|&(v, e)| (f(v), e)).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for (x, y) in self.factors.iter().zip(other.factors.iter()) {
                if x.0 != y.0 {
                    // The monomial holding the more significant variable wins.
                    return y.0.cmp(&x.0);
                }
                if x.1 != y.1 {
                    return x.1.cmp(&y.1);
                }
            }
            self.factors.len().cmp(&other.factors.len())
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(v, e) in &self.factors {
            if !first {
                write!(f, "·")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Integer-coefficient polynomial in jet variables and parameters.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, Int)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Int::ONE)
    }

    pub fn constant(c: Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: vec![(Mono::one(), c)] }
    }

    pub fn int(c: i64) -> Poly {
        Poly::constant(Int::from(c))
    }

    pub fn var(v: Var) -> Poly {
        Poly { terms: vec![(Mono::var(v), Int::ONE)] }
    }

    pub fn monomial(m: Mono, c: Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: vec![(m, c)] }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, Int)>) -> Poly {
        let mut acc: FxHashMap<Mono, Int> = FxHashMap::default();
        for (m, c) in terms {
            accumulate(&mut acc, m, c);
        }
        Poly::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Mono, Int>) -> Poly {
        let mut terms: Vec<(Mono, Int)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    /// Assumes `terms` is already sorted descending with distinct monomials.
    fn from_sorted(terms: Vec<(Mono, Int)>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, Int)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Int> {
        match self.terms.as_slice() {
            [] => Some(Int::ZERO),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Mono, Int)> {
        self.terms.first()
    }

    pub fn lc(&self) -> Int {
        self.terms.first().map(|t| t.1.clone()).unwrap_or(Int::ZERO)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|t| t.0.exponent(v)).max().unwrap_or(0)
    }

    /// Sorted list of variables that occur.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.iter().flat_map(|t| t.0.factors().iter().map(|f| f.0)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|t| t.0.exponent(v) > 0)
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly::from_sorted(out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc: FxHashMap<Mono, Int> = FxHashMap::default();
        acc.reserve(big.len() * 2);
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                accumulate(&mut acc, ma.mul(mb), ca * cb);
            }
        }
        Poly::from_map(acc)
    }

    /// Multiplication by a single term keeps the order.
    pub fn mul_term(&self, m: &Mono, c: &Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_sorted(self.terms.iter().map(|(tm, tc)| (tm.mul(m), tc * c)).collect())
    }

    pub fn scale(&self, c: &Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly::from_sorted(self.terms.iter().map(|(m, tc)| (m.clone(), tc * c)).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Divides every coefficient by `c`; `None` unless all divisions are exact.
    pub fn div_int(&self, c: &Int) -> Option<Poly> {
        if c.is_one() {
            return Some(self.clone());
        }
        let mut out = Vec::with_capacity(self.len());
        for (m, tc) in &self.terms {
            out.push((m.clone(), tc.div_exact(c)?));
        }
        Some(Poly::from_sorted(out))
    }

    /// Non-negative gcd of the coefficients.
    pub fn int_content(&self) -> Int {
        let mut g = Int::ZERO;
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Gcd of all monomials.
    pub fn mono_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else {
            return Mono::one();
        };
        let mut g = first.0.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_mono(&self, m: &Mono) -> Option<Poly> {
        if m.is_one() {
            return Some(self.clone());
        }
        let mut out = Vec::with_capacity(self.len());
        for (tm, c) in &self.terms {
            out.push((tm.div(m)?, c.clone()));
        }
        Some(Poly::from_sorted(out))
    }

    /// Splits off the integer content so the remaining part has a positive
    /// leading coefficient.
    pub fn primitive_split(&self) -> (Int, Poly) {
        if self.is_zero() {
            return (Int::ZERO, Poly::zero());
        }
        let mut c = self.int_content();
        if self.lc().is_negative() {
            c = -c;
        }
        let p = self.div_int(&c).expect("content divides");
        (c, p)
    }

    /// Partial derivative with respect to `v`.
    pub fn partial(&self, v: Var) -> Poly {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            if e == 0 {
                continue;
            }
            let nm = rest.mul(&Mono::var_pow(v, e - 1));
            out.push((nm, c * &Int::from(e as i64)));
        }
        Poly::from_terms(out)
    }

    /// Coefficients with respect to `v`: entry `k` multiplies `v^k`.
    pub fn to_univariate(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Mono, Int)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut b| {
                // Removing one variable preserves relative order only within equal
                // exponents of that variable, which is what each bucket holds.
                b.sort_unstable_by(|x, y| y.0.cmp(&x.0));
                Poly::from_sorted(b)
            })
            .collect()
    }

    pub fn from_univariate(coeffs: &[Poly], v: Var) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let vm = Mono::var_pow(v, k as u32);
            for (m, tc) in &c.terms {
                terms.push((m.mul(&vm), tc.clone()));
            }
        }
        let mut out = terms;
        out.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly::from_sorted(out)
    }

    /// Groups terms by their part in `vars`; each group's cofactor (a
    /// polynomial in the remaining variables) is returned.
    pub fn coefficients_in(&self, vars: &[Var]) -> Vec<Poly> {
        let mut groups: FxHashMap<Mono, Vec<(Mono, Int)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut inside = Vec::new();
            let mut outside = Vec::new();
            for &(v, e) in m.factors() {
                if vars.binary_search(&v).is_ok() {
                    inside.push((v, e));
                } else {
                    outside.push((v, e));
                }
            }
            groups
                .entry(Mono::from_factors(inside))
                .or_default()
                .push((Mono::from_factors(outside), c.clone()));
        }
        groups
            .into_values()
            .map(|mut b| {
                b.sort_unstable_by(|x, y| y.0.cmp(&x.0));
                Poly::from_sorted(b)
            })
            .collect()
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if divisor.is_monomial() {
            let (m, c) = &divisor.terms[0];
            return self.div_mono(m)?.div_int(c);
        }
        if self.total_degree() < divisor.total_degree() {
            return None;
        }
        // Cheap rejections on degrees and the trailing terms.
        for v in divisor.vars() {
            if self.degree_in(v) < divisor.degree_in(v) {
                return None;
            }
        }
        let (am, ac) = self.terms.last().unwrap();
        let (bm, bc) = divisor.terms.last().unwrap();
        am.div(bm)?;
        ac.div_exact(bc)?;

        let (lm, lc) = divisor.terms[0].clone();
        let mut rem: BTreeMap<Mono, Int> = self.terms.iter().cloned().collect();
        let mut quotient: Vec<(Mono, Int)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(&lm)?;
            let qc = c.div_exact(&lc)?;
            for (dm, dc) in divisor.terms.iter().skip(1) {
                let key = dm.mul(&qm);
                let delta = dc * &qc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let nv = e.get() - &delta;
                        if nv.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = nv;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        Some(Poly::from_sorted(quotient))
    }

    /// Evaluates modulo the prime `p` at the point given by `point`.
    pub fn eval_mod(&self, p: u64, point: &dyn Fn(Var) -> u64) -> u64 {
        let mut cache: FxHashMap<Var, u64> = FxHashMap::default();
        let mut acc: u64 = 0;
        for (m, c) in &self.terms {
            let mut t = c.rem_u64(p);
            for &(v, e) in m.factors() {
                let x = *cache.entry(v).or_insert_with(|| point(v) % p);
                t = mul_mod(t, pow_mod(x, e as u64, p), p);
            }
            acc = add_mod(acc, t, p);
        }
        acc
    }

    /// Substitutes variables by other variables.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())))
    }

    /// Highest derivative order of `func` appearing, if any.
    pub fn max_jet_order(&self) -> Option<u8> {
        self.vars().iter().filter_map(|v| v.as_jet().map(|j| j.1)).max()
    }

    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body: Vec<String> = m
                .factors()
                .iter()
                .map(|&(v, e)| {
                    let name = v.latex();
                    if e == 1 {
                        name
                    } else if name.contains('\'') || name.contains('^') {
                        format!("\\left({name}\\right)^{{{e}}}")
                    } else {
                        format!("{name}^{{{e}}}")
                    }
                })
                .collect();
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push(' ');
                }
                out.push_str(&body.join(" "));
            }
        }
        out
    }
}

fn accumulate(acc: &mut FxHashMap<Mono, Int>, m: Mono, c: Int) {
    use std::collections::hash_map::Entry;
    match acc.entry(m) {
        Entry::Occupied(mut e) => {
            let v = e.get() + &c;
            *e.get_mut() = v;
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}·{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Poly {
        Poly::var(Var::z())
    }
    fn f(k: u8) -> Poly {
        Poly::var(Var::f(k))
    }

    #[test]
    fn deglex_order_puts_higher_degree_first() {
        let p = z().add(&z().mul(&z())).add(&Poly::one());
        let degs: Vec<u32> = p.terms().iter().map(|t| t.0.degree()).collect();
        assert_eq!(degs, vec![2, 1, 0]);
        // z is more significant than f, so z·f0 > f0·f1 among degree-2 monomials.
        let q = f(0).mul(&f(1)).add(&z().mul(&f(0)));
        assert_eq!(q.terms()[0].0, Mono::from_factors(vec![(Var::z(), 1), (Var::f(0), 1)]));
    }

    #[test]
    fn arithmetic_cancels() {
        let a = z().add(&f(1));
        let b = z().sub(&f(1));
        let prod = a.mul(&b);
        let expect = z().mul(&z()).sub(&f(1).mul(&f(1)));
        assert_eq!(prod, expect);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = z().add(&f(1));
        let b = z().sub(&f(2)).add(&Poly::int(3));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(prod.add(&Poly::one()).div_exact(&a), None);
        assert_eq!(z().div_exact(&f(0)), None);
    }

    #[test]
    fn sparse_multiple_of_a_dense_divisor() {
        // (z − 1)(z⁴ − 4z³ − 4z² + 16z + 16) has four terms, fewer than the divisor.
        let g = Poly::from_univariate(&[16, 16, -4, -4, 1].map(Poly::int), Var::z());
        let prod = z().sub(&Poly::one()).mul(&g);
        assert_eq!(prod.len(), 4);
        assert_eq!(prod.div_exact(&g), Some(z().sub(&Poly::one())));
    }

    #[test]
    fn univariate_round_trip() {
        let p = z().pow(3).mul(&f(0)).add(&z().mul(&f(1))).add(&Poly::int(7));
        let u = p.to_univariate(Var::z());
        assert_eq!(u.len(), 4);
        assert_eq!(Poly::from_univariate(&u, Var::z()), p);
    }

    #[test]
    fn partial_derivative() {
        let p = z().pow(3).mul(&f(0));
        assert_eq!(p.partial(Var::z()), z().pow(2).mul(&f(0)).scale(&Int::from(3)));
        assert_eq!(p.partial(Var::f(0)), z().pow(3));
        assert!(p.partial(Var::f(1)).is_zero());
    }

    #[test]
    fn modular_evaluation() {
        let p = z().mul(&z()).sub(&Poly::int(1));
        let v = p.eval_mod(101, &|_| 5);
        assert_eq!(v, 24);
        let n = Poly::int(-3).eval_mod(101, &|_| 0);
        assert_eq!(n, 98);
    }
}
