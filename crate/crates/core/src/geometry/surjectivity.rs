use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{embed, locus, sep_trans_split, tool_presentation, AffineIdeal, NewtonSystem, ToolPresentation, TruncSeries};
use crate::closure::ClosureEngine;
use crate::error::{Error, Result};
use crate::field::{AmbientField, RatFunc};
use crate::lambda::p_basis;
use crate::par::{self, Exec};
use crate::subfield::SubfieldPresentation;

/// Centers are searched among the first this many points of `GF(q)^n`.
const MAX_CENTERS: usize = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurjectivityMode {
    /// Direct when `C(a,b)/C(a)` is separable, otherwise through `λ_{F/b/c} a`.
    #[default]
    Auto,
    Direct,
    Lambda,
}

#[derive(Clone, Debug)]
pub struct SurjectivityParams {
    pub samples: usize,
    pub precision: usize,
    pub seed: u64,
    pub mode: SurjectivityMode,
    /// Fixed center instead of the search.
    pub center: Option<Vec<u32>>,
    pub exec: Exec,
}

impl Default for SurjectivityParams {
    fn default() -> Self {
        SurjectivityParams { samples: 100, precision: 32, seed: 0, mode: SurjectivityMode::Auto, center: None, exec: Exec::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub samples: usize,
    pub lifted: usize,
    pub failures: Vec<String>,
    pub precision: usize,
    pub center: Vec<String>,
    pub jacobian_valuation: usize,
    pub mode: SurjectivityMode,
    /// The tuple whose image is sampled (the truncation in λ mode).
    pub tuple: Vec<String>,
    /// Positions of the original coordinates in `tuple`.
    pub sigma: Vec<usize>,
    pub stage: usize,
    pub equations: usize,
}

/// Samples points of `locus(a/C)` in a `T`-adic ball around the image of
/// `a`, lifts each through the tool equations of `b` by Newton iteration and
/// checks the lift on `locus(a ⌢ b / C)`.
pub fn local_surjectivity_check(
    a: &[RatFunc],
    b: &[RatFunc],
    base: &SubfieldPresentation,
    params: &SurjectivityParams,
) -> Result<SurjectivityReport> {
    let over_a = base.adjoin(a);
    let direct_ok = || -> Result<bool> { Ok(sep_trans_split(b, &over_a)?.is_some()) };
    match params.mode {
        SurjectivityMode::Direct => {
            if !direct_ok()? {
                return Err(Error::NotSeparableBase("the target is not separable over the source field".into()));
            }
            Plan::new(a, b, base, None)?.run(params, SurjectivityMode::Direct)
        }
        SurjectivityMode::Auto if direct_ok()? => Plan::new(a, b, base, None)?.run(params, SurjectivityMode::Direct),
        _ => {
            let engine = ClosureEngine::new(base, &p_basis(base)?)?;
            let trunc = engine.lambda_fbc(a, b)?;
            let original = Projection { a: a.to_vec(), sigma: trunc.sigma.clone(), stage: trunc.stage };
            Plan::new(&trunc.tuple, b, base, Some(original))?.run(params, SurjectivityMode::Lambda)
        }
    }
}

struct Projection {
    a: Vec<RatFunc>,
    sigma: Vec<usize>,
    stage: usize,
}

/// Everything fixed before sampling: the coordinate order `free ⌢ alg` for
/// `a` and for `b`, their tool equations and the loci used as checks.
struct Plan {
    k: AmbientField,
    base: SubfieldPresentation,
    /// Entries of `a` then `b`, in the permuted order.
    order: Vec<RatFunc>,
    /// For each permuted position, the original position in `a ⌢ b`.
    origin: Vec<usize>,
    a_len: usize,
    a_free: usize,
    b_free: usize,
    tool: ToolPresentation,
    locus_a: AffineIdeal,
    locus_ab: AffineIdeal,
    projection: Option<(Projection, AffineIdeal)>,
}

impl Plan {
    fn new(a: &[RatFunc], b: &[RatFunc], base: &SubfieldPresentation, projection: Option<Projection>) -> Result<Self> {
        let k = base.ambient().clone();
        let split_a = sep_trans_split(a, base)?
            .ok_or_else(|| Error::NotSeparableBase("the source tuple has no separating transcendence basis over the base".into()))?;
        let over_a = base.adjoin(a);
        let split_b = sep_trans_split(b, &over_a)?
            .ok_or_else(|| Error::NotSeparableBase("the target is not separable over the source field".into()))?;
        let mut origin: Vec<usize> = split_a.transcendental.iter().chain(&split_a.algebraic).copied().collect();
        origin.extend(split_b.transcendental.iter().chain(&split_b.algebraic).map(|&i| a.len() + i));
        let joint: Vec<RatFunc> = a.iter().chain(b).cloned().collect();
        let order: Vec<RatFunc> = origin.iter().map(|&i| joint[i].clone()).collect();
        let tool = tool_presentation(&order, base)?;
        let projection = match projection {
            Some(p) => {
                let l = locus(&p.a, base)?;
                Some((p, l))
            }
            None => None,
        };
        Ok(Plan {
            locus_a: locus(a, base)?,
            locus_ab: locus(&joint, base)?,
            k,
            base: base.clone(),
            order,
            origin,
            a_len: a.len(),
            a_free: split_a.transcendental.len(),
            b_free: split_b.transcendental.len(),
            tool,
            projection,
        })
    }

    fn tags(&self) -> usize {
        self.tool.base_tags
    }

    /// Tool ring variable of permuted position `j`.
    fn var(&self, j: usize) -> usize {
        self.tags() + j
    }

    fn system(&self, range: std::ops::Range<usize>) -> Result<NewtonSystem> {
        let polys = range.clone().map(|j| self.tool.entries[j].g.clone()).collect();
        NewtonSystem::new(&self.tool.ring, polys, range.map(|j| self.var(j)).collect())
    }

    /// The point `(gens(C), order)` at the center.
    fn center_point(&self, center: &[u32], precision: usize) -> Result<Vec<TruncSeries>> {
        self.base
            .gens()
            .iter()
            .chain(&self.order)
            .map(|x| embed(&self.k, x, center, precision))
            .collect()
    }

    /// Every algebraic entry has a unit leading coefficient and a unit
    /// derivative at the center.
    fn center_is_regular(&self, point: &[TruncSeries]) -> bool {
        let one = TruncSeries::one(self.k.field(), point[0].precision());
        (0..self.order.len()).all(|j| {
            let e = &self.tool.entries[j];
            e.degree.is_none()
                || (e.h.eval(point, &one).is_unit() && e.g.derivative(self.var(j)).eval(point, &one).is_unit())
        })
    }

    fn find_center(&self, params: &SurjectivityParams) -> Result<(Vec<u32>, Vec<TruncSeries>)> {
        let f = self.k.field();
        let n = self.k.n();
        let candidates: Vec<Vec<u32>> = match &params.center {
            Some(c) => vec![c.clone()],
            None => {
                let q = f.q() as usize;
                let total = q.checked_pow(n as u32).unwrap_or(usize::MAX).min(MAX_CENTERS);
                (0..total)
                    .map(|mut r| {
                        (0..n)
                            .map(|_| {
                                let d = (r % q) as u32;
                                r /= q;
                                d
                            })
                            .collect()
                    })
                    .collect()
            }
        };
        let mut embedded = false;
        for c in candidates {
            if c.len() != n {
                return Err(Error::invalid("center needs one value per ambient variable"));
            }
            let Ok(point) = self.center_point(&c, params.precision.max(1)) else { continue };
            embedded = true;
            if self.center_is_regular(&point) {
                return Ok((c, point));
            }
        }
        Err(if embedded { Error::NonUnitJacobian } else { Error::DenominatorVanishes })
    }

    fn run(&self, params: &SurjectivityParams, mode: SurjectivityMode) -> Result<SurjectivityReport> {
        let (center, start) = self.find_center(params)?;
        let n_a = self.a_len;
        let a_sys = self.system(self.a_free..n_a)?;
        let b_sys = self.system(n_a + self.b_free..self.order.len())?;
        let jacobian_valuation = b_sys.jacobian_valuation(&start);
        let outcomes = par::map_range(params.exec, params.samples, |i| self.sample(i, params, &start, &a_sys, &b_sys));
        let failures: Vec<String> = outcomes.into_iter().filter_map(|o| o.err()).collect();
        let f = self.k.field();
        let (sigma, stage, tuple) = match &self.projection {
            Some((p, _)) => (p.sigma.clone(), p.stage, self.tuple_strings()),
            None => ((0..n_a).collect(), 0, self.tuple_strings()),
        };
        Ok(SurjectivityReport {
            samples: params.samples,
            lifted: params.samples - failures.len(),
            failures,
            precision: params.precision,
            center: center.iter().map(|&c| f.render(c)).collect(),
            jacobian_valuation,
            mode,
            tuple,
            sigma,
            stage,
            equations: b_sys.polys().len(),
        })
    }

    fn tuple_strings(&self) -> Vec<String> {
        let mut out = vec![String::new(); self.a_len];
        for (j, &o) in self.origin.iter().enumerate() {
            if o < self.a_len {
                out[o] = self.order[j].to_string();
            }
        }
        out
    }

    /// Values of the original `a ⌢ b` coordinates, preceded by the base tags.
    fn original_point(&self, point: &[TruncSeries], upto: usize) -> Vec<TruncSeries> {
        let tags = self.tags();
        let mut out: Vec<TruncSeries> = point[..tags].to_vec();
        let mut coords: Vec<Option<TruncSeries>> = vec![None; upto];
        for (j, &o) in self.origin.iter().enumerate() {
            if o < upto {
                coords[o] = Some(point[self.var(j)].clone());
            }
        }
        out.extend(coords.into_iter().map(|c| c.expect("every coordinate placed")));
        out
    }

    fn sample(
        &self,
        index: usize,
        params: &SurjectivityParams,
        start: &[TruncSeries],
        a_sys: &NewtonSystem,
        b_sys: &NewtonSystem,
    ) -> std::result::Result<(), String> {
        let f = self.k.field();
        let n = params.precision;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(index as u64);
        let mut point = start.to_vec();
        for j in 0..self.a_free {
            let coeffs: Vec<u32> = (0..n).map(|d| if d == 0 { 0 } else { rng.gen_range(0..f.q()) }).collect();
            let v = self.var(j);
            point[v] = point[v].add(&TruncSeries::from_coeffs(f, n, &coeffs));
        }
        let fail = |stage: &str, e: Error| format!("sample {index}: {stage}: {e}");
        let point = super::hensel_newton(a_sys, &point, n).map_err(|e| fail("source coordinates", e))?.point;
        let one = TruncSeries::one(f, n);
        let zero = |s: &TruncSeries| s.is_zero();
        if !self.locus_a.vanishes_at(&self.original_point(&point, self.a_len), &one, zero) {
            return Err(format!("sample {index}: sampled point is off the source locus"));
        }
        let point = super::hensel_newton(b_sys, &point, n).map_err(|e| fail("lift", e))?.point;
        let full = self.original_point(&point, self.origin.len());
        if !self.locus_ab.vanishes_at(&full, &one, zero) {
            return Err(format!("sample {index}: lifted point is off the joint locus"));
        }
        if let Some((p, l)) = &self.projection {
            let tags = self.tags();
            let mut projected: Vec<TruncSeries> = full[..tags].to_vec();
            projected.extend(p.sigma.iter().map(|&s| full[tags + s].clone()));
            if !l.vanishes_at(&projected, &one, zero) {
                return Err(format!("sample {index}: projection leaves the original locus"));
            }
        }
        Ok(())
    }
}
