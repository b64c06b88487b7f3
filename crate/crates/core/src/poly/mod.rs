//! Sparse multivariate polynomials over `GF(q)`.

mod decompose;
mod gcd;
mod groebner;
mod order;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::ff::Fq;

pub use decompose::p_power_decompose;
pub use gcd::{content_in, gcd, gcd_many};
pub use groebner::{
    dimension_from_leading, groebner_basis, poly_reduce, saturate_and_eliminate, GbPoly, Groebner, Ideal, Limits,
};
pub use order::{grevlex_cmp, MonomialOrder};

pub type Exps = SmallVec<[u32; 8]>;

/// Polynomial ring `GF(q)[vars]`. Rings compare by field and variable names.
#[derive(Debug)]
pub struct PolyRing {
    field: Fq,
    vars: Vec<String>,
}

pub type RingRef = Arc<PolyRing>;

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars
    }
}

impl Eq for PolyRing {}

impl PolyRing {
    pub fn new(field: Fq, vars: Vec<String>) -> RingRef {
        Arc::new(PolyRing { field, vars })
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

pub fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Terms are kept sorted descending in grevlex with no zero coefficients.
#[derive(Clone)]
pub struct MPoly {
    ring: RingRef,
    terms: Vec<(Exps, u32)>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for MPoly {}

impl std::hash::Hash for MPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Anything a polynomial can be evaluated into.
pub trait Algebra: Clone {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiply by a field element given by its code.
    fn scale(&self, c: u32) -> Self;
}

impl MPoly {
    pub fn zero(ring: &RingRef) -> Self {
        MPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &RingRef) -> Self {
        MPoly::constant(ring, 1)
    }

    pub fn constant(ring: &RingRef, c: u32) -> Self {
        let terms = if c == 0 { Vec::new() } else { vec![(zero_exps(ring.nvars()), c)] };
        MPoly { ring: ring.clone(), terms }
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        let mut e = zero_exps(ring.nvars());
        e[i] = 1;
        MPoly { ring: ring.clone(), terms: vec![(e, 1)] }
    }

    pub fn monomial(ring: &RingRef, exps: Exps, c: u32) -> Self {
        assert_eq!(exps.len(), ring.nvars());
        let terms = if c == 0 { Vec::new() } else { vec![(exps, c)] };
        MPoly { ring: ring.clone(), terms }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &RingRef, mut terms: Vec<(Exps, u32)>) -> Self {
        let f = ring.field();
        terms.sort_by(|a, b| grevlex_cmp(&b.0, &a.0));
        let mut out: Vec<(Exps, u32)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = f.add(last.1, c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        MPoly { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn field(&self) -> &Fq {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Exps, u32)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Exps, u32)> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value() == Some(1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<u32> {
        if self.terms.is_empty() {
            Some(0)
        } else if self.is_constant() {
            Some(self.terms[0].1)
        } else {
            None
        }
    }

    /// Leading coefficient under grevlex.
    pub fn lc(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.1)
    }

    /// Leading term under an arbitrary order.
    pub fn lead_term(&self, order: &MonomialOrder) -> Option<&(Exps, u32)> {
        match order {
            MonomialOrder::Grevlex => self.terms.first(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0)),
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|(e, _)| e.iter().map(|&x| x as u64).sum::<u64>()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(e, _)| e[var] > 0)
    }

    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&v| self.uses_var(v)).collect()
    }

    fn check_ring(&self, other: &MPoly) {
        assert!(same_ring(&self.ring, &other.ring), "polynomials from different rings");
    }

    pub fn neg(&self) -> MPoly {
        let f = self.field();
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), f.neg(*c))).collect();
        MPoly { ring: self.ring.clone(), terms }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.check_ring(other);
        let f = self.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match grevlex_cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(a[i].1, b[j].1);
                    if c != 0 {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        MPoly { ring: self.ring.clone(), terms: out }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> MPoly {
        if c == 0 {
            return MPoly::zero(&self.ring);
        }
        let f = self.field();
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), f.mul(*x, c))).collect();
        MPoly { ring: self.ring.clone(), terms }
    }

    pub fn mul_term(&self, exps: &[u32], c: u32) -> MPoly {
        if c == 0 {
            return MPoly::zero(&self.ring);
        }
        let f = self.field();
        let terms = self
            .terms
            .iter()
            .map(|(e, x)| (add_exps(e, exps), f.mul(*x, c)))
            .collect();
        // multiplying by a monomial preserves grevlex order
        MPoly { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(&self.ring);
        }
        if self.terms.len() < other.terms.len() {
            return other.mul(self);
        }
        let f = self.field();
        let mut acc: Vec<(Exps, u32)> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (eb, cb) in &other.terms {
            for (ea, ca) in &self.terms {
                acc.push((add_exps(ea, eb), f.mul(*ca, *cb)));
            }
        }
        MPoly::from_terms(&self.ring, acc)
    }

    pub fn pow(&self, mut e: u64) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The `p`-th power, computed termwise (Frobenius is additive).
    pub fn frobenius(&self) -> MPoly {
        let f = self.field();
        let p = f.p();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().map(|&x| x * p).collect(), f.frobenius(*c)))
            .collect();
        MPoly { ring: self.ring.clone(), terms }
    }

    /// Scales so that the grevlex leading coefficient is one.
    pub fn monic(&self) -> MPoly {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, 1)) => self.clone(),
            Some(&(_, c)) => self.scale(self.field().inv(c).expect("nonzero")),
        }
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        let f = self.field();
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                if e[var] == 0 {
                    return None;
                }
                let k = f.from_int(e[var] as i64);
                let c = f.mul(*c, k);
                if c == 0 {
                    return None;
                }
                let mut e = e.clone();
                e[var] -= 1;
                Some((e, c))
            })
            .collect();
        MPoly::from_terms(&self.ring, terms)
    }

    /// Coefficients with respect to one variable: `self = sum_k out[k] * var^k`.
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Exps, u32)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var] as usize;
            e2[var] = 0;
            buckets[k].push((e2, *c));
        }
        buckets
            .into_iter()
            .map(|t| {
                // removing one variable keeps grevlex order only within equal powers; re-sort
                MPoly::from_terms(&self.ring, t)
            })
            .collect()
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        self.check_ring(d);
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero(&self.ring));
        }
        let f = self.field();
        if let Some(c) = d.constant_value() {
            return Some(self.scale(f.inv(c).ok()?));
        }
        let (dl, dc) = d.terms[0].clone();
        let dinv = f.inv(dc).ok()?;
        let mut rem = self.clone();
        let mut quot: Vec<(Exps, u32)> = Vec::new();
        while let Some((e, c)) = rem.terms.first().cloned() {
            let m = div_exps(&e, &dl)?;
            let qc = f.mul(c, dinv);
            rem = rem.sub(&d.mul_term(&m, qc));
            quot.push((m, qc));
        }
        Some(MPoly::from_terms(&self.ring, quot))
    }

    /// Moves the polynomial into `target`, sending variable `i` to `map[i]`.
    pub fn map_ring(&self, target: &RingRef, map: &[usize]) -> MPoly {
        assert_eq!(map.len(), self.ring.nvars());
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut out = zero_exps(n);
                for (i, &k) in e.iter().enumerate() {
                    out[map[i]] += k;
                }
                (out, *c)
            })
            .collect();
        MPoly::from_terms(target, terms)
    }

    /// Same variables by name, in another ring containing them all.
    pub fn embed(&self, target: &RingRef) -> Result<MPoly> {
        let map: Option<Vec<usize>> = self.ring.vars().iter().map(|v| target.var_index(v)).collect();
        let map = map.ok_or(Error::SpecMismatch)?;
        if target.field() != self.field() {
            return Err(Error::SpecMismatch);
        }
        Ok(self.map_ring(target, &map))
    }

    pub fn eval<A: Algebra>(&self, vals: &[A], one: &A) -> A {
        assert_eq!(vals.len(), self.ring.nvars());
        let mut powers: Vec<Vec<A>> = vals.iter().map(|v| vec![one.clone(), v.clone()]).collect();
        let mut acc = one.scale(0);
        for (e, c) in &self.terms {
            let mut t = one.scale(*c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap().mul(&vals[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][k]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitutes polynomials for variables.
    pub fn compose(&self, vals: &[MPoly]) -> MPoly {
        let target = vals.first().map(|v| v.ring.clone());
        match target {
            Some(r) => self.eval(vals, &MPoly::one(&r)),
            None => self.clone(),
        }
    }

    pub fn render(&self) -> String {
        format!("{self}")
    }
}

impl Algebra for MPoly {
    fn add(&self, other: &Self) -> Self {
        MPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        MPoly::mul(self, other)
    }
    fn scale(&self, c: u32) -> Self {
        MPoly::scale(self, c)
    }
}

pub(crate) fn zero_exps(n: usize) -> Exps {
    smallvec::smallvec![0; n]
}

#[inline]
pub(crate) fn add_exps(a: &[u32], b: &[u32]) -> Exps {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.checked_add(y).expect("exponent overflow"))
        .collect()
}

#[inline]
pub(crate) fn div_exps(a: &[u32], b: &[u32]) -> Option<Exps> {
    a.iter().zip(b).map(|(&x, &y)| x.checked_sub(y)).collect()
}

#[inline]
pub(crate) fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x <= y)
}

#[inline]
pub(crate) fn lcm_exps(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect()
}

fn render_monomial(vars: &[String], e: &[u32]) -> String {
    let mut parts = Vec::new();
    for (v, &k) in vars.iter().zip(e) {
        match k {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{k}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let field = self.field();
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono = render_monomial(self.ring.vars(), e);
            let coeff = field.render(*c);
            if mono.is_empty() {
                f.write_str(&coeff)?;
            } else if *c == 1 {
                f.write_str(&mono)?;
            } else if field.is_compound(*c) {
                write!(f, "({coeff})*{mono}")?;
            } else {
                write!(f, "{coeff}*{mono}")?;
            }
        }
        Ok(())
    }
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    #[test]
    fn arithmetic_and_rendering() {
        let r = ring(2, &["t"]);
        let t = MPoly::var(&r, 0);
        let one = MPoly::one(&r);
        let u = t.pow(3).add(&t.pow(2)).add(&one);
        assert_eq!(u.to_string(), "t^3 + t^2 + 1");
        assert_eq!(t.add(&one).pow(2).to_string(), "t^2 + 1");
        assert!(t.sub(&t).is_zero());
        let r3 = ring(3, &["s", "t"]);
        let s = MPoly::var(&r3, 0);
        let t3 = MPoly::var(&r3, 1);
        assert_eq!(s.mul(&t3).scale(2).add(&s.pow(2)).to_string(), "s^2 + 2*s*t");
    }

    #[test]
    fn exact_division() {
        let r = ring(3, &["x", "y"]);
        let x = MPoly::var(&r, 0);
        let y = MPoly::var(&r, 1);
        let a = x.add(&y);
        let b = x.sub(&y).add(&MPoly::one(&r));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.add(&MPoly::one(&r)).div_exact(&a).is_none());
    }

    #[test]
    fn derivative_in_characteristic() {
        let r = ring(2, &["y"]);
        let y = MPoly::var(&r, 0);
        assert!(y.pow(2).derivative(0).is_zero());
        assert!(y.pow(2).add(&y).derivative(0).is_one());
    }
}
