//! Buchberger's algorithm with Gebauer–Möller pair elimination and the
//! normal selection strategy.

use std::cmp::Ordering;
use std::sync::OnceLock;
use std::time::Instant;

use super::{add_exps, div_exps, divides, lcm_exps, same_ring, zero_exps, Exps, MPoly, MonomialOrder, PolyRing, RingRef};
use crate::error::{Error, Result};
use crate::ff::Fq;

/// Resource caps shared by every Gröbner computation in a session.
#[derive(Clone, Debug)]
pub struct Limits {
    pub spair_cap: u64,
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { spair_cap: 1_000_000, deadline: None }
    }
}

impl Limits {
    fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::ResourceLimit { what: "time", limit: 0 }),
            _ => Ok(()),
        }
    }
}

/// Polynomial with terms sorted descending under the active order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbPoly {
    pub terms: Vec<(Exps, u32)>,
}

impl GbPoly {
    pub fn lm(&self) -> &Exps {
        &self.terms[0].0
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exps,
}

/// Gröbner machinery bound to a field, an order and limits.
pub struct Groebner<'a> {
    field: &'a Fq,
    order: &'a MonomialOrder,
    limits: &'a Limits,
}

impl<'a> Groebner<'a> {
    pub fn new(field: &'a Fq, order: &'a MonomialOrder, limits: &'a Limits) -> Self {
        Groebner { field, order, limits }
    }

    pub fn convert(&self, p: &MPoly) -> GbPoly {
        let mut terms = p.terms().to_vec();
        if *self.order != MonomialOrder::Grevlex {
            terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        }
        GbPoly { terms }
    }

    pub fn to_mpoly(&self, ring: &RingRef, g: &GbPoly) -> MPoly {
        MPoly::from_terms(ring, g.terms.clone())
    }

    fn monic(&self, mut g: GbPoly) -> GbPoly {
        if let Some(&(_, c)) = g.terms.first() {
            if c != 1 {
                let inv = self.field.inv(c).expect("nonzero");
                for t in &mut g.terms {
                    t.1 = self.field.mul(t.1, inv);
                }
            }
        }
        g
    }

    /// `f - c * x^m * g`, all sorted descending.
    fn sub_mul(&self, f: &[(Exps, u32)], c: u32, m: &[u32], g: &[(Exps, u32)]) -> Vec<(Exps, u32)> {
        let fld = self.field;
        let negc = fld.neg(c);
        let mut out = Vec::with_capacity(f.len() + g.len());
        let (mut i, mut j) = (0, 0);
        let mut gj: Option<Exps> = g.first().map(|t| add_exps(&t.0, m));
        while i < f.len() && j < g.len() {
            let ge = gj.as_ref().unwrap();
            match self.order.cmp(&f[i].0, ge) {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((gj.take().unwrap(), fld.mul(negc, g[j].1)));
                    j += 1;
                    gj = g.get(j).map(|t| add_exps(&t.0, m));
                }
                Ordering::Equal => {
                    let v = fld.add(f[i].1, fld.mul(negc, g[j].1));
                    if v != 0 {
                        out.push((f[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                    gj = g.get(j).map(|t| add_exps(&t.0, m));
                }
            }
        }
        out.extend_from_slice(&f[i..]);
        while j < g.len() {
            out.push((add_exps(&g[j].0, m), fld.mul(negc, g[j].1)));
            j += 1;
        }
        out
    }

    /// Full normal form of `f` modulo `basis` (every element monic).
    pub fn reduce(&self, f: GbPoly, basis: &[&GbPoly]) -> GbPoly {
        let mut work = f.terms;
        let mut pos = 0;
        let mut rem: Vec<(Exps, u32)> = Vec::new();
        while pos < work.len() {
            let (e, c) = (&work[pos].0, work[pos].1);
            let div = basis.iter().find(|g| divides(g.lm(), e));
            match div {
                Some(g) => {
                    let m = div_exps(e, g.lm()).unwrap();
                    let c = self.field.mul(c, self.field.inv(g.terms[0].1).unwrap());
                    work = self.sub_mul(&work[pos..], c, &m, &g.terms);
                    pos = 0;
                }
                None => {
                    rem.push(work[pos].clone());
                    pos += 1;
                }
            }
        }
        GbPoly { terms: rem }
    }

    fn spoly(&self, f: &GbPoly, g: &GbPoly, lcm: &[u32]) -> GbPoly {
        let mf = div_exps(lcm, f.lm()).unwrap();
        let mg = div_exps(lcm, g.lm()).unwrap();
        let fm: Vec<(Exps, u32)> = f.terms[1..].iter().map(|(e, c)| (add_exps(e, &mf), *c)).collect();
        let terms = self.sub_mul(&fm, g.terms[0].1, &mg, &g.terms[1..]);
        GbPoly { terms }
    }

    fn update(&self, polys: &[GbPoly], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
        let lh = polys[h].lm().clone();
        let coprime = |a: &[u32], b: &[u32]| a.iter().zip(b).all(|(&x, &y)| x == 0 || y == 0);
        let mut cands: Vec<(usize, Exps)> =
            active.iter().map(|&g| (g, lcm_exps(&lh, polys[g].lm()))).collect();
        let mut kept: Vec<(usize, Exps)> = Vec::new();
        while !cands.is_empty() {
            let (g, l) = cands.remove(0);
            let redundant = cands.iter().chain(kept.iter()).any(|(_, l2)| divides(l2, &l));
            if coprime(&lh, polys[g].lm()) || !redundant {
                kept.push((g, l));
            }
        }
        pairs.retain(|p| {
            !(divides(&lh, &p.lcm)
                && lcm_exps(polys[p.i].lm(), &lh) != p.lcm
                && lcm_exps(polys[p.j].lm(), &lh) != p.lcm)
        });
        for (g, l) in kept {
            if !coprime(&lh, polys[g].lm()) {
                pairs.push(Pair { i: g, j: h, lcm: l });
            }
        }
        active.retain(|&g| !divides(&lh, polys[g].lm()));
        active.push(h);
    }

    /// Reduced Gröbner basis of `known ∪ gens`, where `known` is already a
    /// Gröbner basis under this order (pairs among it are skipped).
    pub fn basis(&self, gens: Vec<GbPoly>, known: Vec<GbPoly>) -> Result<Vec<GbPoly>> {
        let mut polys: Vec<GbPoly> = Vec::new();
        let mut active: Vec<usize> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        for g in known {
            if !g.is_zero() {
                polys.push(self.monic(g));
                active.push(polys.len() - 1);
            }
        }
        for g in gens {
            let r = {
                let basis: Vec<&GbPoly> = active.iter().map(|&i| &polys[i]).collect();
                self.reduce(g, &basis)
            };
            if !r.is_zero() {
                polys.push(self.monic(r));
                let h = polys.len() - 1;
                self.update(&polys, &mut active, &mut pairs, h);
            }
        }
        let mut processed: u64 = 0;
        while !pairs.is_empty() {
            let best = (0..pairs.len())
                .min_by(|&a, &b| {
                    self.order
                        .cmp(&pairs[a].lcm, &pairs[b].lcm)
                        .then((pairs[a].i, pairs[a].j).cmp(&(pairs[b].i, pairs[b].j)))
                })
                .unwrap();
            let pair = pairs.swap_remove(best);
            processed += 1;
            if processed > self.limits.spair_cap {
                return Err(Error::ResourceLimit { what: "S-pairs", limit: self.limits.spair_cap });
            }
            if processed.is_multiple_of(64) {
                self.limits.check_time()?;
            }
            let s = self.spoly(&polys[pair.i], &polys[pair.j], &pair.lcm);
            let r = {
                let basis: Vec<&GbPoly> = active.iter().map(|&i| &polys[i]).collect();
                self.reduce(s, &basis)
            };
            if !r.is_zero() {
                polys.push(self.monic(r));
                let h = polys.len() - 1;
                self.update(&polys, &mut active, &mut pairs, h);
            }
        }
        let minimal: Vec<GbPoly> = active.iter().map(|&i| polys[i].clone()).collect();
        let mut reduced: Vec<GbPoly> = (0..minimal.len())
            .map(|k| {
                let others: Vec<&GbPoly> =
                    minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, g)| g).collect();
                let head = minimal[k].terms[0].clone();
                let tail = self.reduce(GbPoly { terms: minimal[k].terms[1..].to_vec() }, &others);
                let mut terms = vec![head];
                terms.extend(tail.terms);
                self.monic(GbPoly { terms })
            })
            .collect();
        reduced.sort_by(|a, b| self.order.cmp(b.lm(), a.lm()));
        Ok(reduced)
    }
}

/// An ideal given by generators, with a write-once cached reduced basis.
#[derive(Debug)]
pub struct Ideal {
    ring: RingRef,
    generators: Vec<MPoly>,
    cached: OnceLock<(MonomialOrder, Vec<MPoly>)>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let cached = OnceLock::new();
        if let Some(c) = self.cached.get() {
            let _ = cached.set(c.clone());
        }
        Ideal { ring: self.ring.clone(), generators: self.generators.clone(), cached }
    }
}

impl Ideal {
    pub fn new(ring: &RingRef, generators: Vec<MPoly>) -> Result<Self> {
        if generators.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(Error::SpecMismatch);
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ring: ring.clone(), generators, cached: OnceLock::new() })
    }

    /// An ideal whose generators are known to be the reduced basis for `order`.
    pub fn from_basis(ring: &RingRef, basis: Vec<MPoly>, order: MonomialOrder) -> Self {
        let cached = OnceLock::new();
        let _ = cached.set((order, basis.clone()));
        Ideal { ring: ring.clone(), generators: basis, cached }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[MPoly] {
        &self.generators
    }

    pub fn cached_basis(&self) -> Option<&(MonomialOrder, Vec<MPoly>)> {
        self.cached.get()
    }

    pub fn groebner(&self, order: &MonomialOrder, limits: &Limits) -> Result<Vec<MPoly>> {
        if let Some((o, b)) = self.cached.get() {
            if o == order {
                return Ok(b.clone());
            }
        }
        let gb = Groebner::new(self.ring.field(), order, limits);
        let gens = self.generators.iter().map(|g| gb.convert(g)).collect();
        let basis: Vec<MPoly> = gb.basis(gens, Vec::new())?.iter().map(|g| gb.to_mpoly(&self.ring, g)).collect();
        if self.cached.get().is_none() {
            let _ = self.cached.set((order.clone(), basis.clone()));
        }
        Ok(basis)
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Reduced Gröbner basis of the ideal for `order`.
pub fn groebner_basis(ideal: &Ideal, order: &MonomialOrder, limits: &Limits) -> Result<Vec<MPoly>> {
    ideal.groebner(order, limits)
}

/// Normal form of `f` modulo the polynomials `g` (the divisors need not
/// form a Gröbner basis; the result is then one deterministic remainder).
pub fn poly_reduce(f: &MPoly, g: &[MPoly], order: &MonomialOrder) -> Result<MPoly> {
    if g.iter().any(|h| !same_ring(h.ring(), f.ring())) {
        return Err(Error::SpecMismatch);
    }
    let limits = Limits::default();
    let gb = Groebner::new(f.field(), order, &limits);
    let divisors: Vec<GbPoly> = g.iter().filter(|h| !h.is_zero()).map(|h| gb.monic(gb.convert(h))).collect();
    let refs: Vec<&GbPoly> = divisors.iter().collect();
    let r = gb.reduce(gb.convert(f), &refs);
    Ok(gb.to_mpoly(f.ring(), &r))
}

/// `(I : f^inf) ∩ GF(q)[keep]`, via a tag variable `z` with `z*f - 1` and a
/// block order eliminating `z` together with every variable outside `keep`.
pub fn saturate_and_eliminate(ideal: &Ideal, f: &MPoly, keep: &[usize], limits: &Limits) -> Result<Ideal> {
    let ring = ideal.ring();
    if !same_ring(f.ring(), ring) {
        return Err(Error::SpecMismatch);
    }
    let n = ring.nvars();
    if keep.iter().any(|&k| k >= n) {
        return Err(Error::invalid("keep variable out of range"));
    }
    let saturate = !f.is_constant();
    let mut order_vars: Vec<usize> = (0..n).filter(|v| !keep.contains(v)).collect();
    let split = order_vars.len() + usize::from(saturate);
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    order_vars.extend(&keep_sorted);
    let mut names: Vec<String> = Vec::new();
    if saturate {
        names.push("_sat".into());
    }
    names.extend(order_vars.iter().map(|&v| ring.vars()[v].clone()));
    let big = PolyRing::new(ring.field().clone(), names);
    let offset = usize::from(saturate);
    let mut map = vec![0; n];
    for (pos, &v) in order_vars.iter().enumerate() {
        map[v] = pos + offset;
    }
    let mut gens: Vec<MPoly> = ideal.generators().iter().map(|g| g.map_ring(&big, &map)).collect();
    if saturate {
        let z = MPoly::var(&big, 0);
        gens.push(z.mul(&f.map_ring(&big, &map)).sub(&MPoly::one(&big)));
    }
    let order = MonomialOrder::elimination(split);
    let gb = Groebner::new(ring.field(), &order, limits);
    let basis = gb.basis(gens.iter().map(|g| gb.convert(g)).collect(), Vec::new())?;
    let back: Vec<usize> = {
        let mut inv = vec![usize::MAX; big.nvars()];
        for (v, &pos) in map.iter().enumerate() {
            inv[pos] = v;
        }
        inv
    };
    let kept: Vec<MPoly> = basis
        .iter()
        .filter(|g| g.terms.iter().all(|(e, _)| e[..split].iter().all(|&x| x == 0)))
        .map(|g| {
            let terms = g
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut out = zero_exps(n);
                    for (pos, &k) in e.iter().enumerate().skip(split) {
                        out[back[pos]] = k;
                    }
                    (out, *c)
                })
                .collect();
            MPoly::from_terms(ring, terms).monic()
        })
        .collect();
    let mut kept = kept;
    kept.sort_by(|a, b| super::grevlex_cmp(&b.terms()[0].0, &a.terms()[0].0));
    Ok(Ideal::from_basis(ring, kept, MonomialOrder::Grevlex))
}

/// Krull dimension of `GF(q)[vars]/I` read off the leading monomials of a
/// Gröbner basis: the largest set of variables containing the support of no
/// leading monomial. `None` for the unit ideal.
pub fn dimension_from_leading(leading: &[Exps], vars: &[usize]) -> Option<usize> {
    if leading.iter().any(|e| e.iter().all(|&x| x == 0)) {
        return None;
    }
    let k = vars.len();
    assert!(k < 24, "too many variables for staircase dimension");
    let mut best = 0;
    for mask in 0u32..(1 << k) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let inside = |v: usize| vars.iter().position(|&x| x == v).is_some_and(|i| mask & (1 << i) != 0);
        let blocked = leading
            .iter()
            .any(|e| e.iter().enumerate().all(|(v, &x)| x == 0 || inside(v)));
        if !blocked {
            best = size;
        }
    }
    Some(best)
}
