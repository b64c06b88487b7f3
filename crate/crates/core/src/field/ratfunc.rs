use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{gcd, Algebra, MPoly, RingRef};

/// Normalized rational function: coprime parts, denominator monic under
/// grevlex, zero stored as `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn needs_parens(p: &MPoly) -> bool {
    if p.num_terms() > 1 {
        return true;
    }
    match p.terms().first() {
        None => false,
        Some((e, c)) => {
            let factors = e.iter().filter(|&&k| k > 0).count() + usize::from(*c != 1);
            factors > 1 || p.field().is_compound(*c)
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let bare_compound = self.num.constant_value().is_some_and(|c| self.num.field().is_compound(c));
        if self.num.num_terms() > 1 || bare_compound {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if needs_parens(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return RatFunc::zero(num.ring());
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lc = den.lc();
        if lc == 1 {
            RatFunc { num, den }
        } else {
            let inv = den.field().inv(lc).expect("nonzero");
            RatFunc { num: num.scale(inv), den: den.scale(inv) }
        }
    }

    pub fn from_poly(num: MPoly) -> Self {
        let den = MPoly::one(num.ring());
        RatFunc { num, den }
    }

    pub fn zero(ring: &RingRef) -> Self {
        RatFunc { num: MPoly::zero(ring), den: MPoly::one(ring) }
    }

    pub fn one(ring: &RingRef) -> Self {
        RatFunc { num: MPoly::one(ring), den: MPoly::one(ring) }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn ring(&self) -> &RingRef {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            if self.den.is_one() {
                return RatFunc { num: self.num.add(&other.num), den: self.den.clone() };
            }
            return Self::normalize(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_one() {
            return RatFunc { num: self.num.mul(&other.den).add(&other.num), den: other.den.clone() };
        }
        if other.den.is_one() {
            return RatFunc { num: other.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        let g = gcd(&self.den, &other.den);
        let a = self.den.div_exact(&g).unwrap();
        let b = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&b).add(&other.num.mul(&a));
        Self::normalize(num, a.mul(&other.den))
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.ring());
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc { num: self.num.mul(&other.num), den: self.den.clone() };
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.lc();
        let inv = den.field().inv(lc).unwrap();
        RatFunc { num: num.scale(inv), den: den.scale(inv) }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lc = self.num.lc();
        let inv = self.num.field().inv(lc)?;
        Ok(RatFunc { num: self.den.scale(inv), den: self.num.scale(inv) })
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, c: u32) -> RatFunc {
        if c == 0 {
            return RatFunc::zero(self.ring());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, mut e: u64) -> RatFunc {
        let mut base = self.clone();
        let mut acc = RatFunc::one(self.ring());
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

    /// `self^p`; coprimality and monicity survive the Frobenius.
    pub fn frobenius(&self) -> RatFunc {
        RatFunc { num: self.num.frobenius(), den: self.den.frobenius() }
    }

    /// Evaluates a polynomial (over any ring with the same field) at rational values.
    pub fn eval_poly(poly: &MPoly, vals: &[RatFunc], ring: &RingRef) -> RatFunc {
        poly.eval(vals, &RatFunc::one(ring))
    }
}

impl Algebra for RatFunc {
    fn add(&self, other: &Self) -> Self {
        RatFunc::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RatFunc::mul(self, other)
    }
    fn scale(&self, c: u32) -> Self {
        RatFunc::scale(self, c)
    }
}
