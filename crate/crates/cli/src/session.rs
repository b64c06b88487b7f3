use std::time::{Duration, Instant};

use plambda::closure::ClosureEngine;
use plambda::ff::Fq;
use plambda::field::{AmbientField, RatFunc};
use plambda::lambda::p_basis;
use plambda::par::Exec;
use plambda::poly::Limits;
use plambda::subfield::SubfieldPresentation;
use plambda::Result;

use crate::args::{BaseArgs, SessionArgs};

pub struct Session {
    pub k: AmbientField,
    pub args: SessionArgs,
}

pub fn split_list(src: &str, sep: char) -> Vec<&str> {
    if src.trim().is_empty() {
        Vec::new()
    } else {
        src.split(sep).map(str::trim).collect()
    }
}

impl Session {
    pub fn new(args: &SessionArgs) -> Result<Self> {
        let field = Fq::parse(&args.field)?;
        let vars = split_list(&args.vars, ',').into_iter().map(String::from).collect();
        let limits = Limits {
            spair_cap: args.spair_cap.unwrap_or(Limits::default().spair_cap),
            deadline: args.time_limit_ms.map(|ms| Instant::now() + Duration::from_millis(ms)),
        };
        let k = AmbientField::with_config(field, vars, limits, exec_mode(args))?;
        Ok(Session { k, args: args.clone() })
    }

    pub fn exec(&self) -> Exec {
        self.k.exec()
    }

    pub fn element(&self, src: &str) -> Result<RatFunc> {
        self.k.parse(src)
    }

    pub fn tuple(&self, src: &str) -> Result<Vec<RatFunc>> {
        split_list(src, ',').into_iter().map(|s| self.k.parse(s)).collect()
    }

    /// `GF(q)(gens)`; the empty list is the prime-power field.
    pub fn subfield(&self, src: &str) -> Result<SubfieldPresentation> {
        SubfieldPresentation::new(&self.k, self.tuple(src)?)
    }

    /// The base `C` with a p-basis, either given or extracted.
    pub fn engine(&self, base: &BaseArgs) -> Result<ClosureEngine> {
        let engine = match &base.base {
            None => ClosureEngine::over_prime_field(&self.k),
            Some(src) => {
                let c = self.subfield(src)?;
                let basis = match &base.pbasis {
                    Some(b) => self.tuple(b)?,
                    None => p_basis(&c)?,
                };
                ClosureEngine::new(&c, &basis)?
            }
        };
        Ok(engine.with_prune(self.args.prune))
    }
}

fn exec_mode(args: &SessionArgs) -> Exec {
    if args.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}
