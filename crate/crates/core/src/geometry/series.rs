use std::fmt;

use crate::error::{Error, Result};
use crate::ff::Fq;
use crate::poly::Algebra;

/// A power series in one variable known modulo `T^N`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    field: Fq,
    coeffs: Vec<u32>,
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(t^{})", self, self.precision())
    }
}

impl TruncSeries {
    pub fn zero(field: &Fq, precision: usize) -> Self {
        TruncSeries { field: field.clone(), coeffs: vec![0; precision] }
    }

    pub fn constant(field: &Fq, precision: usize, c: u32) -> Self {
        let mut s = Self::zero(field, precision);
        if precision > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(field: &Fq, precision: usize) -> Self {
        Self::constant(field, precision, field.one())
    }

    /// `c * T^k`.
    pub fn monomial(field: &Fq, precision: usize, c: u32, k: usize) -> Self {
        let mut s = Self::zero(field, precision);
        if k < precision {
            s.coeffs[k] = c;
        }
        s
    }

    /// Coefficients of `T^0, T^1, ...`; missing ones are zero, extra ones dropped.
    pub fn from_coeffs(field: &Fq, precision: usize, coeffs: &[u32]) -> Self {
        let mut s = Self::zero(field, precision);
        for (slot, &c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u32 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    /// Index of the first nonzero coefficient; `N` when the series is `0 mod T^N`.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|&c| c != 0).unwrap_or(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation() == self.precision()
    }

    pub fn is_unit(&self) -> bool {
        self.precision() > 0 && self.coeffs[0] != 0
    }

    /// Drops precision to `n` (no-op when already coarser).
    pub fn truncate(&self, n: usize) -> Self {
        TruncSeries { field: self.field.clone(), coeffs: self.coeffs[..n.min(self.precision())].to_vec() }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u32, u32) -> u32) -> Self {
        let n = self.precision().min(other.precision());
        TruncSeries {
            field: self.field.clone(),
            coeffs: (0..n).map(|i| f(self.coeffs[i], other.coeffs[i])).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        TruncSeries { field: self.field.clone(), coeffs: self.coeffs.iter().map(|&a| self.field.neg(a)).collect() }
    }

    pub fn scale(&self, c: u32) -> Self {
        TruncSeries { field: self.field.clone(), coeffs: self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let f = &self.field;
        let mut out = vec![0; n];
        for (i, &a) in self.coeffs[..n].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs[..n - i].iter().enumerate() {
                if b != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        TruncSeries { field: f.clone(), coeffs: out }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field, self.precision());
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

    /// Inverse of a unit, by the coefficient recursion.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let n = self.precision();
        let c0 = f.inv(self.coeffs[0])?;
        let mut out = vec![0; n];
        out[0] = c0;
        for k in 1..n {
            let mut acc = 0;
            for j in 1..=k {
                acc = f.add(acc, f.mul(self.coeffs[j], out[k - j]));
            }
            out[k] = f.neg(f.mul(acc, c0));
        }
        Ok(TruncSeries { field: f.clone(), coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Renders as a polynomial in `var`, lowest degree first.
    pub fn render(&self, var: &str) -> String {
        let f = &self.field;
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| {
                let coeff = if f.is_compound(c) { format!("({})", f.render(c)) } else { f.render(c) };
                match (k, c == f.one()) {
                    (0, _) => coeff,
                    (_, true) if k == 1 => var.to_string(),
                    (_, true) => format!("{var}^{k}"),
                    (1, false) => format!("{coeff}*{var}"),
                    _ => format!("{coeff}*{var}^{k}"),
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

impl Algebra for TruncSeries {
    fn add(&self, other: &Self) -> Self {
        TruncSeries::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        TruncSeries::mul(self, other)
    }
    fn scale(&self, c: u32) -> Self {
        TruncSeries::scale(self, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_valuation() {
        let f = Fq::prime(3).unwrap();
        let one_minus_t = TruncSeries::from_coeffs(&f, 6, &[1, 2]);
        let geo = one_minus_t.inv().unwrap();
        assert_eq!(geo.coeffs(), &[1, 1, 1, 1, 1, 1]);
        assert!(one_minus_t.mul(&geo).sub(&TruncSeries::one(&f, 6)).is_zero());
        let t2 = TruncSeries::monomial(&f, 6, 2, 2);
        assert_eq!(t2.valuation(), 2);
        assert_eq!(t2.inv(), Err(Error::DivisionByZero));
        assert_eq!(t2.render("t"), "2*t^2");
        assert_eq!(TruncSeries::zero(&f, 4).valuation(), 4);
        assert_eq!(t2.pow(3).valuation(), 6);
    }

    #[test]
    fn compound_coefficients_render_in_parens() {
        let f = Fq::with_degree(2, 2).unwrap();
        let a = f.generator().unwrap();
        let s = TruncSeries::from_coeffs(&f, 3, &[1, f.add(a, 1), 1]);
        assert_eq!(s.render("t"), "1 + (alpha + 1)*t + t^2");
    }
}
