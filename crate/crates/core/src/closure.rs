//! Splitting pairs, local Λ-closures, the finite truncation `λ_{F/b/c} a`
//! and the separability deciders.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{AmbientField, RatFunc};
use crate::lambda::{p_basis, relative_p_basis, LambdaTerm, PSpan, TermRef};
use crate::subfield::{field_leq, SubfieldPresentation};

/// Stages past this count abort with `ResourceLimit`.
pub const MAX_STAGES: usize = 64;

/// One stage `(a, b)` of the splitting-pairs recursion, with a provenance
/// term for every entry of `b` (entries of `a` are entries of `b`).
#[derive(Clone, Debug)]
pub struct SplitPair {
    pub a: Vec<RatFunc>,
    pub b: Vec<RatFunc>,
    /// Position in `b` of each entry of `a`.
    pub a_pos: Vec<usize>,
    pub b_terms: Vec<TermRef>,
}

impl SplitPair {
    /// The pair `(∅, a)`; provenance variables are `a1, a2, ...`.
    pub fn initial(a: &[RatFunc]) -> Self {
        SplitPair {
            a: Vec::new(),
            b: a.to_vec(),
            a_pos: Vec::new(),
            b_terms: (1..=a.len()).map(|i| LambdaTerm::var(format!("a{i}"))).collect(),
        }
    }

    /// `a ⌢ b`.
    pub fn flattened(&self) -> Vec<RatFunc> {
        self.a.iter().chain(&self.b).cloned().collect()
    }

    /// `(self.a, self.b)` are initial segments of `(next.a, next.b)`.
    pub fn precedes(&self, next: &SplitPair) -> bool {
        next.a.starts_with(&self.a) && next.b.starts_with(&self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "stage", rename_all = "snake_case")]
pub enum Termination {
    /// `C(stage n+1) = C(stage n)`.
    Fixpoint(usize),
    /// Stage `n` is the first over which the target tuple is separable.
    TargetSeparable(usize),
}

#[derive(Clone, Debug)]
pub struct ClosureTrace {
    pub stages: Vec<SplitPair>,
    pub termination: Termination,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub terms: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceReport {
    pub stages: Vec<StageReport>,
    pub termination: Termination,
}

impl ClosureTrace {
    pub fn last(&self) -> &SplitPair {
        self.stages.last().expect("traces are never empty")
    }

    pub fn report(&self) -> TraceReport {
        let render = |xs: &[RatFunc]| xs.iter().map(|x| x.to_string()).collect();
        TraceReport {
            stages: self
                .stages
                .iter()
                .map(|s| StageReport {
                    a: render(&s.a),
                    b: render(&s.b),
                    terms: s.b_terms.iter().map(|t| t.to_sexpr()).collect(),
                })
                .collect(),
            termination: self.termination,
        }
    }
}

/// A base `C` with a p-basis `c`, checked on construction, and the
/// variables `c1, c2, ...` standing for `c` in provenance terms.
#[derive(Clone, Debug)]
pub struct ClosureEngine {
    base: SubfieldPresentation,
    c: Vec<RatFunc>,
    c_terms: Vec<TermRef>,
    prune: bool,
}

impl ClosureEngine {
    /// Checks that `c` is a p-basis of `C` and is p-independent in `K`,
    /// which is the separability of `K/C`.
    pub fn new(base: &SubfieldPresentation, c: &[RatFunc]) -> Result<Self> {
        let k = base.ambient();
        let (_, kept) = PSpan::greedy(k, c)?;
        if kept.len() != c.len() {
            return Err(Error::NotSeparableBase("the p-basis of the base is not p-independent in the ambient field".into()));
        }
        for x in c {
            if !base.contains(x)? {
                return Err(Error::NotSeparableBase(format!("{x} does not lie in the base")));
            }
        }
        let spanned = SubfieldPresentation::new(
            k,
            base.gens().iter().map(|g| g.frobenius()).chain(c.iter().cloned()).collect(),
        )?;
        for g in base.gens() {
            if !spanned.contains(g)? {
                return Err(Error::NotSeparableBase(format!("{g} is not spanned by the given p-basis")));
            }
        }
        Ok(ClosureEngine {
            base: base.clone(),
            c: c.to_vec(),
            c_terms: (1..=c.len()).map(|i| LambdaTerm::var(format!("c{i}"))).collect(),
            prune: false,
        })
    }

    /// Base `GF(q)` with the empty p-basis.
    pub fn over_prime_field(k: &AmbientField) -> Self {
        ClosureEngine { base: SubfieldPresentation::base(k), c: Vec::new(), c_terms: Vec::new(), prune: false }
    }

    /// Drop zeros and already-generated elements from appended blocks.
    pub fn with_prune(mut self, prune: bool) -> Self {
        self.prune = prune;
        self
    }

    pub fn ambient(&self) -> &AmbientField {
        self.base.ambient()
    }

    pub fn base(&self) -> &SubfieldPresentation {
        &self.base
    }

    pub fn p_basis(&self) -> &[RatFunc] {
        &self.c
    }

    /// Variable bindings for evaluating provenance terms.
    pub fn environment(&self, original: &[RatFunc]) -> HashMap<String, RatFunc> {
        let mut env = HashMap::new();
        for (i, x) in original.iter().enumerate() {
            env.insert(format!("a{}", i + 1), x.clone());
        }
        for (i, x) in self.c.iter().enumerate() {
            env.insert(format!("c{}", i + 1), x.clone());
        }
        env
    }

    /// `C(b)` for a stage, dropping constants and repeats.
    pub fn stage_field(&self, pair: &SplitPair) -> SubfieldPresentation {
        let mut extra: Vec<RatFunc> = Vec::new();
        for x in &pair.b {
            if !x.is_constant() && !extra.contains(x) && !self.base.gens().contains(x) {
                extra.push(x.clone());
            }
        }
        self.base.adjoin(&extra)
    }

    pub fn splitting_step(&self, pair: &SplitPair) -> Result<SplitPair> {
        let k = self.ambient();
        let p = k.p();
        let mut span = PSpan::new(k);
        for x in self.c.iter().chain(&pair.a) {
            if !span.push(x)? {
                return Err(Error::invalid("the I-part of the pair is not p-independent over the base"));
            }
        }
        let mut next = pair.clone();
        for (j, x) in pair.b.iter().enumerate() {
            if span.push(x)? {
                next.a.push(x.clone());
                next.a_pos.push(j);
            }
        }
        let params: Vec<TermRef> =
            self.c_terms.iter().cloned().chain(next.a_pos.iter().map(|&j| pair.b_terms[j].clone())).collect();
        let mut field = self.prune.then(|| self.stage_field(pair));
        for (j, x) in pair.b.iter().enumerate() {
            if pair.b[..j].contains(x) {
                continue;
            }
            let lambdas = span
                .coordinates(x)?
                .ok_or_else(|| Error::invalid("stage element outside the p-span of the I-part"))?;
            for (rank, value) in lambdas.into_iter().enumerate() {
                if let Some(f) = &mut field {
                    if value.is_constant() || f.contains(&value)? {
                        continue;
                    }
                    *f = f.adjoin(std::slice::from_ref(&value));
                }
                let index = crate::multiindex::MultiIndex::from_rank(rank, params.len(), p);
                next.b_terms.push(LambdaTerm::lambda(p, &index, pair.b_terms[j].clone(), params.clone()));
                next.b.push(value);
            }
        }
        Ok(next)
    }

    /// Whether every appended element of `next` already lies in `C(pair)`.
    fn is_stable(&self, pair: &SplitPair, next: &SplitPair) -> Result<bool> {
        let field = self.stage_field(pair);
        for x in &next.b[pair.b.len()..] {
            if !field.contains(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Iterates splitting steps from `(∅, a)` until the generated field stops growing.
    pub fn local_closure(&self, a: &[RatFunc]) -> Result<ClosureTrace> {
        let mut stages = vec![SplitPair::initial(a)];
        for n in 0..MAX_STAGES {
            let next = self.splitting_step(&stages[n])?;
            let stable = self.is_stable(&stages[n], &next)?;
            stages.push(next);
            if stable {
                return Ok(ClosureTrace { stages, termination: Termination::Fixpoint(n) });
            }
        }
        Err(Error::ResourceLimit { what: "closure stages", limit: MAX_STAGES as u64 })
    }

    /// Generators of the closure: the final I-part, then the remaining
    /// elements of the final stage that enlarge the field.
    pub fn closure_field(&self, trace: &ClosureTrace) -> Result<SubfieldPresentation> {
        let last = trace.last();
        let mut gens: Vec<RatFunc> = last.a.clone();
        let mut field = self.base.adjoin(&gens);
        for x in &last.b {
            if !field.contains(x)? {
                gens.push(x.clone());
                field = field.adjoin(std::slice::from_ref(x));
            }
        }
        Ok(field.with_label("closure"))
    }

    /// `λ_{F/b/c} a`: the first stage over which `b` is separable.
    pub fn lambda_fbc(&self, a: &[RatFunc], b: &[RatFunc]) -> Result<Truncation> {
        let mut stages = vec![SplitPair::initial(a)];
        for n in 0..=MAX_STAGES {
            let field = self.stage_field(&stages[n]);
            if is_separable(&field, &field.adjoin(b))? {
                let stage = &stages[n];
                let tuple = stage.flattened();
                let sigma: Vec<usize> = (stage.a.len()..stage.a.len() + a.len()).collect();
                if sigma.iter().map(|&i| &tuple[i]).ne(a.iter()) {
                    return Err(Error::invalid("coordinate projection does not recover the input"));
                }
                let trace = ClosureTrace { stages, termination: Termination::TargetSeparable(n) };
                return Ok(Truncation { tuple, sigma, stage: n, trace });
            }
            if n == MAX_STAGES {
                break;
            }
            let next = self.splitting_step(&stages[n])?;
            stages.push(next);
        }
        Err(Error::ResourceLimit { what: "closure stages", limit: MAX_STAGES as u64 })
    }

    /// Stage counts of `lambda_fbc` over every ordering of `a` (at most 4 entries).
    pub fn lambda_fbc_all_orderings(&self, a: &[RatFunc], b: &[RatFunc]) -> Result<Vec<(Vec<usize>, usize)>> {
        if a.len() > 4 {
            return Err(Error::invalid("all-orderings mode is limited to tuples of length at most 4"));
        }
        let mut out = Vec::new();
        for perm in permutations(a.len()) {
            let permuted: Vec<RatFunc> = perm.iter().map(|&i| a[i].clone()).collect();
            out.push((perm, self.lambda_fbc(&permuted, b)?.stage));
        }
        Ok(out)
    }
}

/// Output of [`ClosureEngine::lambda_fbc`]: `sigma` selects the original
/// coordinates from `tuple`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub tuple: Vec<RatFunc>,
    pub sigma: Vec<usize>,
    pub stage: usize,
    pub trace: ClosureTrace,
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for slot in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(slot, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// `Λ_K GF(q)(gens)` together with its trace.
pub fn lambda_closure_of_subfield(k: &AmbientField, gens: &[RatFunc]) -> Result<(SubfieldPresentation, ClosureTrace)> {
    let engine = ClosureEngine::over_prime_field(k);
    let trace = engine.local_closure(gens)?;
    Ok((engine.closure_field(&trace)?, trace))
}

fn known_whole(e: &SubfieldPresentation) -> bool {
    let k = e.ambient();
    (0..k.n()).all(|i| e.gens().contains(&k.var(i)))
}

/// `E/D` is separable: a p-basis of `D` stays p-independent in `E`.
pub fn is_separable(d: &SubfieldPresentation, e: &SubfieldPresentation) -> Result<bool> {
    if !field_leq(d, e)? {
        return Err(Error::invalid("separability needs the smaller field inside the larger"));
    }
    let basis = p_basis(d)?;
    if known_whole(e) {
        let (_, kept) = PSpan::greedy(e.ambient(), &basis)?;
        return Ok(kept.len() == basis.len());
    }
    let frob: Vec<RatFunc> = e.gens().iter().map(|g| g.frobenius()).collect();
    for i in 0..basis.len() {
        let mut gens = frob.clone();
        gens.extend(basis.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()));
        if SubfieldPresentation::new(e.ambient(), gens)?.contains(&basis[i])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Separable and `E = E^(p) D`.
pub fn is_separated(d: &SubfieldPresentation, e: &SubfieldPresentation) -> Result<bool> {
    Ok(is_separable(d, e)? && relative_p_basis(e, d)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Fq;

    fn field(vars: &[&str]) -> AmbientField {
        AmbientField::new(Fq::prime(2).unwrap(), vars).unwrap()
    }

    fn tuple(k: &AmbientField, xs: &[&str]) -> Vec<RatFunc> {
        k.parse_tuple(xs).unwrap()
    }

    fn check_provenance(engine: &ClosureEngine, trace: &ClosureTrace, original: &[RatFunc]) {
        let env = engine.environment(original);
        for stage in &trace.stages {
            for (x, t) in stage.b.iter().zip(&stage.b_terms) {
                assert_eq!(&t.eval(engine.ambient(), &env).unwrap(), x, "{}", t);
            }
        }
    }

    #[test]
    fn splitting_examples() {
        let k = field(&["t"]);
        let e = ClosureEngine::over_prime_field(&k);
        let s1 = e.splitting_step(&SplitPair::initial(&tuple(&k, &["t^4"]))).unwrap();
        assert!(s1.a.is_empty());
        assert_eq!(s1.b, tuple(&k, &["t^4", "t^2"]));
        let s = e.splitting_step(&SplitPair::initial(&tuple(&k, &["t^4", "t^2", "t^2", "t"]))).unwrap();
        assert_eq!(s.a, tuple(&k, &["t"]));
        assert_eq!(s.b[4..], tuple(&k, &["t^2", "0", "t", "0", "0", "1"])[..]);

        let k = field(&["s", "t"]);
        let e = ClosureEngine::over_prime_field(&k);
        let pair = SplitPair { a: vec![k.var(0)], b: vec![k.var(0)], a_pos: vec![0], b_terms: vec![LambdaTerm::var("a1")] };
        let s = e.splitting_step(&pair).unwrap();
        assert_eq!(s.a, vec![k.var(0)]);
        assert_eq!(s.b[1..], [k.zero(), k.one()]);
    }

    #[test]
    fn closure_examples() {
        let k = field(&["t"]);
        let e = ClosureEngine::over_prime_field(&k);
        let whole = SubfieldPresentation::whole(&k);
        for (src, n) in [("t^4", 2), ("t", 0), ("t^16", 4)] {
            let a = tuple(&k, &[src]);
            let trace = e.local_closure(&a).unwrap();
            assert_eq!(trace.termination, Termination::Fixpoint(n), "{src}");
            for w in trace.stages.windows(2) {
                assert!(w[0].precedes(&w[1]));
            }
            check_provenance(&e, &trace, &a);
            let f = e.closure_field(&trace).unwrap();
            assert_eq!(f.gens(), &[k.var(0)][..]);
            assert!(crate::subfield::field_equal(&f, &whole).unwrap());
        }
        let k = field(&["s", "t"]);
        let (f, _) = lambda_closure_of_subfield(&k, &tuple(&k, &["s", "s*t^2"])).unwrap();
        assert!(crate::subfield::field_equal(&f, &SubfieldPresentation::whole(&k)).unwrap());
        let (f, trace) = lambda_closure_of_subfield(&k, &tuple(&k, &["s*t"])).unwrap();
        assert_eq!(f.gens(), &tuple(&k, &["s*t"])[..]);
        assert_eq!(trace.termination, Termination::Fixpoint(0));
    }

    #[test]
    fn truncation_examples() {
        let k = field(&["t"]);
        let e = ClosureEngine::over_prime_field(&k);
        let r = e.lambda_fbc(&tuple(&k, &["t^2"]), &tuple(&k, &["t"])).unwrap();
        assert_eq!(r.stage, 1);
        assert!(r.tuple.contains(&k.var(0)));
        assert_eq!(r.tuple[r.sigma[0]], k.parse("t^2").unwrap());
        let r = e.lambda_fbc(&tuple(&k, &["t^2"]), &tuple(&k, &["t^4"])).unwrap();
        assert_eq!((r.stage, r.sigma.clone()), (0, vec![0]));
        let k = field(&["s", "t"]);
        let e = ClosureEngine::over_prime_field(&k);
        let r = e.lambda_fbc(&tuple(&k, &["s^2*t^4"]), &tuple(&k, &["s*t^2"])).unwrap();
        assert_eq!(r.stage, 1);
        assert!(r.tuple.contains(&k.parse("s*t^2").unwrap()));
    }

    #[test]
    fn separability_examples() {
        let k = field(&["t"]);
        let e = SubfieldPresentation::whole(&k);
        let d = SubfieldPresentation::new(&k, tuple(&k, &["t^2"])).unwrap();
        assert!(!is_separable(&d, &e).unwrap());
        let d = SubfieldPresentation::new(&k, tuple(&k, &["t^2 + t"])).unwrap();
        assert!(is_separable(&d, &e).unwrap());
        assert!(is_separated(&d, &e).unwrap());
        assert!(is_separable(&e, &e).unwrap());
        assert!(is_separated(&e, &e).unwrap());
        // F_2(t^3, t^2) is all of F_2(t) but is decided through membership.
        let e2 = SubfieldPresentation::new(&k, tuple(&k, &["t^3", "t^2"])).unwrap();
        let d2 = SubfieldPresentation::new(&k, tuple(&k, &["t^4"])).unwrap();
        assert!(!is_separable(&d2, &e2).unwrap());
    }

    #[test]
    fn base_checks() {
        let k = field(&["s", "t"]);
        let c = SubfieldPresentation::new(&k, tuple(&k, &["s^2"])).unwrap();
        assert!(matches!(ClosureEngine::new(&c, &tuple(&k, &["s^2"])), Err(Error::NotSeparableBase(_))));
        let c = SubfieldPresentation::new(&k, tuple(&k, &["s"])).unwrap();
        assert!(ClosureEngine::new(&c, &tuple(&k, &["s"])).is_ok());
        assert!(matches!(ClosureEngine::new(&c, &[]), Err(Error::NotSeparableBase(_))));
    }

    #[test]
    fn permutation_listing() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}
