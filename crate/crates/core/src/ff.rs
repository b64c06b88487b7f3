//! Arithmetic in small finite fields `GF(p^m)`.
//!
//! Elements are encoded as integers in `[0, q)`: the base-`p` digits of the
//! code are the coefficients of the representative polynomial modulo the
//! fixed modulus (lowest degree first). Prime fields take a direct modular
//! path; extension fields use exp/log tables over a primitive element.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Fixed irreducible moduli, coefficients lowest degree first, monic.
const MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
];

/// Symbol used for the residue class of `x` in extension fields.
pub const GENERATOR_SYMBOL: &str = "alpha";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::UnsupportedField(format!("{p} is not a prime")));
        }
        if m == 0 {
            return Err(Error::UnsupportedField("extension degree must be >= 1".into()));
        }
        if m == 1 {
            return Ok(FieldSpec { p, m, modulus: vec![0, 1] });
        }
        match MODULI.iter().find(|(mp, mm, _)| *mp == p && *mm == m) {
            Some((_, _, modulus)) => Ok(FieldSpec { p, m, modulus: modulus.to_vec() }),
            None => Err(Error::UnsupportedField(format!(
                "GF({p}^{m}) is outside the modulus table (p in 2,3,5,7 and m <= 4)"
            ))),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.m)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.m)
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if (n as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    frob_inv: Vec<u32>,
}

struct FqInner {
    spec: FieldSpec,
    q: u32,
    tables: Option<Tables>,
}

/// Shared handle to a finite field; cheap to clone.
#[derive(Clone)]
pub struct Fq(Arc<FqInner>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.spec)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Fq {}

impl Fq {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let q64 = spec.q();
        if q64 > u32::MAX as u64 {
            return Err(Error::UnsupportedField(format!("{spec} too large")));
        }
        let q = q64 as u32;
        let tables = if spec.m > 1 { Some(build_tables(&spec, q)?) } else { None };
        Ok(Fq(Arc::new(FqInner { spec, q, tables })))
    }

    pub fn prime(p: u32) -> Result<Self> {
        Fq::new(FieldSpec::new(p, 1)?)
    }

    pub fn with_degree(p: u32, m: u32) -> Result<Self> {
        Fq::new(FieldSpec::new(p, m)?)
    }

    /// Parses `GF(p)` or `GF(p^m)`.
    pub fn parse(src: &str) -> Result<Self> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::UnsupportedField(format!("expected GF(p) or GF(p^m), got `{src}`")))?;
        let (p, m) = match inner.split_once('^') {
            Some((p, m)) => (p, m),
            None => (inner, "1"),
        };
        let p: u32 = p.parse().map_err(|_| Error::UnsupportedField(format!("bad characteristic in `{src}`")))?;
        let m: u32 = m.parse().map_err(|_| Error::UnsupportedField(format!("bad degree in `{src}`")))?;
        Fq::with_degree(p, m)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn m(&self) -> u32 {
        self.0.spec.m
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.spec.m == 1
    }

    #[inline]
    pub fn zero(&self) -> u32 {
        0
    }

    #[inline]
    pub fn one(&self) -> u32 {
        1
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p() as i64) as u32
    }

    /// The residue class of `x` (the generator of the extension); `None` for prime fields.
    pub fn generator(&self) -> Option<u32> {
        if self.is_prime_field() {
            None
        } else {
            Some(self.p())
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.spec.p;
        if self.0.spec.m == 1 {
            let s = a as u64 + b as u64;
            let p = p as u64;
            return if s >= p { (s - p) as u32 } else { s as u32 };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.spec.p;
        if self.0.spec.m == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0;
        let mut scale = 1;
        while a > 0 {
            out += ((p - a % p) % p) * scale;
            a /= p;
            scale *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.0.tables {
            None => ((a as u64 * b as u64) % self.0.spec.p as u64) as u32,
            Some(t) => {
                let n = self.0.q - 1;
                let e = (t.log[a as usize] + t.log[b as usize]) % n;
                t.exp[e as usize]
            }
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0.tables {
            None => self.pow(a, self.0.spec.p as u64 - 2),
            Some(t) => {
                let n = self.0.q - 1;
                t.exp[((n - t.log[a as usize]) % n) as usize]
            }
        })
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The unique `y` with `y^p = a`, i.e. `a^(p^(m-1))`.
    #[inline]
    pub fn frobenius_inv(&self, a: u32) -> u32 {
        match &self.0.tables {
            None => a,
            Some(t) => t.frob_inv[a as usize],
        }
    }

    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.0.spec.p as u64)
    }

    pub fn elem(&self, value: u32) -> Result<FqElem> {
        if value >= self.q() {
            return Err(Error::invalid(format!("{value} is not a code of {}", self.spec())));
        }
        Ok(FqElem { field: self.clone(), value })
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q()
    }

    /// Base-`p` digits of an element code, lowest degree first, length `m`.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let p = self.p();
        let mut a = a;
        (0..self.m())
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    /// Whether the element needs parentheses when used as a coefficient.
    pub fn is_compound(&self, a: u32) -> bool {
        self.digits(a).iter().filter(|&&d| d != 0).count() > 1
    }

    pub fn render(&self, a: u32) -> String {
        if self.is_prime_field() {
            return a.to_string();
        }
        let digits = self.digits(a);
        let mut parts = Vec::new();
        for (k, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => GENERATOR_SYMBOL.to_string(),
                _ => format!("{GENERATOR_SYMBOL}^{k}"),
            };
            parts.push(match (d, k) {
                (_, 0) => d.to_string(),
                (1, _) => mono,
                _ => format!("{d}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (m..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (j, &mc) in modulus.iter().enumerate() {
            let idx = k - m + j;
            prod[idx] = (prod[idx] + (p as u64 - c) * mc as u64 % p as u64) % p as u64;
        }
    }
    prod.truncate(m);
    prod.resize(m, 0);
    prod.into_iter().map(|c| c as u32).collect()
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn decode(mut code: u32, p: u32, m: usize) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn build_tables(spec: &FieldSpec, q: u32) -> Result<Tables> {
    let p = spec.p;
    let m = spec.m as usize;
    let n = q - 1;
    for cand in 2..q {
        let g = decode(cand, p, m);
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = decode(1, p, m);
        let mut ok = true;
        for e in 0..n {
            let code = encode(&cur, p);
            if log[code as usize] != u32::MAX {
                ok = false;
                break;
            }
            log[code as usize] = e;
            exp.push(code);
            cur = poly_mulmod(&cur, &g, &spec.modulus, p);
        }
        if !ok || encode(&cur, p) != 1 {
            continue;
        }
        log[0] = 0;
        let k = (p as u64).pow(spec.m - 1);
        let frob_inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    let e = (log[a as usize] as u64 * k) % n as u64;
                    exp[e as usize]
                }
            })
            .collect();
        return Ok(Tables { exp, log, frob_inv });
    }
    Err(Error::UnsupportedField(format!("modulus of {spec} is not irreducible")))
}

/// A field element bundled with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FqElem {
    field: Fq,
    value: u32,
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.render(self.value))
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.render(self.value))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FqOp {
    Add,
    Sub,
    Mul,
    Inv,
}

impl FqElem {
    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    fn check(&self, other: &FqElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    fn wrap(&self, value: u32) -> FqElem {
        FqElem { field: self.field.clone(), value }
    }

    pub fn add(&self, other: &FqElem) -> Result<FqElem> {
        self.check(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FqElem) -> Result<FqElem> {
        self.check(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FqElem) -> Result<FqElem> {
        self.check(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<FqElem> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FqElem {
        self.wrap(self.field.pow(self.value, e))
    }

    pub fn frobenius_inv(&self) -> FqElem {
        self.wrap(self.field.frobenius_inv(self.value))
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

/// Dispatches one of the four field operations; `y` is ignored for `Inv`.
pub fn fq_arith(op: FqOp, x: &FqElem, y: Option<&FqElem>) -> Result<FqElem> {
    let need = || y.ok_or_else(|| Error::invalid("binary operation needs two operands"));
    match op {
        FqOp::Add => x.add(need()?),
        FqOp::Sub => x.sub(need()?),
        FqOp::Mul => x.mul(need()?),
        FqOp::Inv => x.inv(),
    }
}
