use std::fmt;
use std::sync::Arc;

use super::RatFunc;
use crate::error::{Error, Result};
use crate::ff::Fq;
use crate::par::Exec;
use crate::parse::{parse_expr, Expr, ExprOps};
use crate::poly::{Limits, MPoly, PolyRing, RingRef};

struct Inner {
    ring: RingRef,
    limits: Limits,
    exec: Exec,
}

/// Session handle for `GF(q)(t1, ..., tn)`; the canonical p-basis is `(t1, ..., tn)`.
#[derive(Clone)]
pub struct AmbientField(Arc<Inner>);

impl fmt::Debug for AmbientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.field().spec(), self.ring().vars().join(","))
    }
}

impl PartialEq for AmbientField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0.ring == *other.0.ring
    }
}

impl AmbientField {
    pub fn new(field: Fq, vars: &[&str]) -> Result<Self> {
        Self::with_config(field, vars.iter().map(|s| s.to_string()).collect(), Limits::default(), Exec::default())
    }

    pub fn with_config(field: Fq, vars: Vec<String>, limits: Limits, exec: Exec) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            let ok = !v.is_empty()
                && v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ok || v == crate::ff::GENERATOR_SYMBOL {
                return Err(Error::invalid(format!("`{v}` is not a valid variable name")));
            }
            if vars[..i].contains(v) {
                return Err(Error::invalid(format!("variable `{v}` declared twice")));
            }
        }
        let ring = PolyRing::new(field, vars);
        Ok(AmbientField(Arc::new(Inner { ring, limits, exec })))
    }

    pub fn field(&self) -> &Fq {
        self.0.ring.field()
    }

    pub fn ring(&self) -> &RingRef {
        &self.0.ring
    }

    pub fn limits(&self) -> &Limits {
        &self.0.limits
    }

    pub fn exec(&self) -> Exec {
        self.0.exec
    }

    pub fn p(&self) -> u32 {
        self.field().p()
    }

    /// Number of transcendental generators.
    pub fn n(&self) -> usize {
        self.0.ring.nvars()
    }

    pub fn var(&self, i: usize) -> RatFunc {
        RatFunc::from_poly(MPoly::var(self.ring(), i))
    }

    pub fn canonical_p_basis(&self) -> Vec<RatFunc> {
        (0..self.n()).map(|i| self.var(i)).collect()
    }

    pub fn zero(&self) -> RatFunc {
        RatFunc::zero(self.ring())
    }

    pub fn one(&self) -> RatFunc {
        RatFunc::one(self.ring())
    }

    pub fn constant(&self, c: u32) -> RatFunc {
        RatFunc::from_poly(MPoly::constant(self.ring(), c))
    }

    /// Parses an element in the shared grammar.
    pub fn parse(&self, src: &str) -> Result<RatFunc> {
        let expr = parse_expr(src)?;
        self.eval_expr(&expr)
    }

    pub fn eval_expr(&self, expr: &Expr) -> Result<RatFunc> {
        let leaf = |e: &Expr| -> Result<RatFunc> {
            match e {
                Expr::Int(v) => Ok(self.constant(self.field().from_int((*v % self.p() as u64) as i64))),
                Expr::Generator => match self.field().generator() {
                    Some(g) => Ok(self.constant(g)),
                    None => Err(Error::UnknownVariable(crate::ff::GENERATOR_SYMBOL.into())),
                },
                Expr::Var(v) => match self.ring().var_index(v) {
                    Some(i) => Ok(self.var(i)),
                    None => Err(Error::UnknownVariable(v.clone())),
                },
                _ => unreachable!(),
            }
        };
        expr.fold(&leaf, &RatOps)
    }

    pub fn parse_tuple(&self, items: &[&str]) -> Result<Vec<RatFunc>> {
        items.iter().map(|s| self.parse(s)).collect()
    }
}

struct RatOps;

impl ExprOps<RatFunc> for RatOps {
    fn neg(&self, a: RatFunc) -> Result<RatFunc> {
        Ok(a.neg())
    }
    fn add(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc> {
        Ok(a.add(&b))
    }
    fn sub(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc> {
        Ok(a.sub(&b))
    }
    fn mul(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc> {
        Ok(a.mul(&b))
    }
    fn div(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc> {
        a.div(&b)
    }
    fn pow(&self, a: RatFunc, e: u64) -> Result<RatFunc> {
        Ok(a.pow(e))
    }
}
