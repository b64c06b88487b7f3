//! p-independence, the lambda functions, Λ-terms, p-bases and imperfection
//! degrees.
//!
//! Membership in `K^(p)(c)` for a p-independent tuple `c` is linear algebra
//! over `K`: if `x = sum_I c^I * u_I^p`, taking canonical p-coordinates gives
//! `coords(x)[J] = sum_I u_I * coords(c^I)[J]`, so the lambda values `u_I`
//! solve a `K`-linear system directly and no p-th roots are extracted.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{linear_solve, p_coordinates, AmbientField, LinearSolution, RatFunc};
use crate::multiindex::MultiIndex;
use crate::subfield::SubfieldPresentation;

/// `K^(p)(basis)` for an absolutely p-independent `basis`, with the
/// p-coordinates of every monomial `basis^I` (ordered by index rank).
#[derive(Clone, Debug)]
pub struct PSpan {
    k: AmbientField,
    basis: Vec<RatFunc>,
    monomials: Vec<RatFunc>,
    columns: Vec<Vec<RatFunc>>,
}

impl PSpan {
    pub fn new(k: &AmbientField) -> Self {
        let one = k.one();
        let col = p_coordinates(k, &one).into_vec();
        PSpan { k: k.clone(), basis: Vec::new(), monomials: vec![one], columns: vec![col] }
    }

    /// Greedy span of `elems`; returns the span and the kept elements' positions.
    pub fn greedy(k: &AmbientField, elems: &[RatFunc]) -> Result<(Self, Vec<usize>)> {
        let mut span = PSpan::new(k);
        let mut kept = Vec::new();
        for (i, e) in elems.iter().enumerate() {
            if span.push(e)? {
                kept.push(i);
            }
        }
        Ok((span, kept))
    }

    pub fn basis(&self) -> &[RatFunc] {
        &self.basis
    }

    /// Lambda values of `x` over the basis, by index rank, or `None` when
    /// `x` lies outside the span.
    pub fn coordinates(&self, x: &RatFunc) -> Result<Option<Vec<RatFunc>>> {
        let target = p_coordinates(&self.k, x).into_vec();
        if x.is_zero() {
            return Ok(Some(vec![self.k.zero(); self.monomials.len()]));
        }
        let rows: Vec<Vec<RatFunc>> = (0..target.len())
            .map(|r| self.columns.iter().map(|c| c[r].clone()).collect())
            .collect();
        match linear_solve(&rows, &target)? {
            LinearSolution::Unique(v) => Ok(Some(v)),
            LinearSolution::NoSolution => Ok(None),
            LinearSolution::Underdetermined { .. } => Err(Error::NotPIndependent),
        }
    }

    pub fn contains(&self, x: &RatFunc) -> Result<bool> {
        if self.basis.len() == self.k.n() {
            return Ok(true);
        }
        Ok(self.coordinates(x)?.is_some())
    }

    /// Adjoins `e` when it lies outside the span; reports whether it did.
    pub fn push(&mut self, e: &RatFunc) -> Result<bool> {
        if self.contains(e)? {
            return Ok(false);
        }
        let p = self.k.p() as u64;
        let powers: Vec<RatFunc> = (0..p).map(|j| e.pow(j)).collect();
        let mut monomials = Vec::with_capacity(self.monomials.len() * p as usize);
        for m in &self.monomials {
            for pw in &powers {
                monomials.push(m.mul(pw));
            }
        }
        let k = self.k.clone();
        self.columns = crate::par::map(k.exec(), monomials.clone(), |m| p_coordinates(&k, &m).into_vec());
        self.monomials = monomials;
        self.basis.push(e.clone());
        Ok(true)
    }
}

/// Witness for `x ∈ K^(p)C(b)`: `x = sum_I basis^I * lambdas[I]^p` with
/// `basis` a p-independent sub-tuple of `gens(C) ⌢ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanCoordinates {
    pub basis: Vec<RatFunc>,
    pub lambdas: BTreeMap<MultiIndex, RatFunc>,
}

fn base_span(c: &SubfieldPresentation) -> Result<PSpan> {
    Ok(PSpan::greedy(c.ambient(), c.gens())?.0)
}

fn indexed(values: Vec<RatFunc>, len: usize, p: u32) -> BTreeMap<MultiIndex, RatFunc> {
    values.into_iter().enumerate().map(|(r, v)| (MultiIndex::from_rank(r, len, p), v)).collect()
}

/// Decides `x ∈ K^(p)C(b)`.
pub fn in_p_span(x: &RatFunc, b: &[RatFunc], c: &SubfieldPresentation) -> Result<Option<SpanCoordinates>> {
    let mut span = base_span(c)?;
    for e in b {
        span.push(e)?;
    }
    let p = c.ambient().p();
    Ok(span.coordinates(x)?.map(|v| SpanCoordinates {
        lambdas: indexed(v, span.basis().len(), p),
        basis: span.basis,
    }))
}

/// Each `b_i ∉ K^(p)C(b without b_i)`.
pub fn p_independent(b: &[RatFunc], c: &SubfieldPresentation) -> Result<bool> {
    let mut span = base_span(c)?;
    for e in b {
        if !span.push(e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Left-greedy p-independent sub-tuple of `b` over `C`.
pub fn p_ind_prefix(b: &[RatFunc], c: &SubfieldPresentation) -> Result<Vec<RatFunc>> {
    let mut span = base_span(c)?;
    let mut kept = Vec::new();
    for e in b {
        if span.push(e)? {
            kept.push(e.clone());
        }
    }
    Ok(kept)
}

/// The family `λ^b_I(a)` with `a = sum_I b^I * λ^b_I(a)^p`.
pub fn lambda_eval(k: &AmbientField, a: &RatFunc, b: &[RatFunc]) -> Result<BTreeMap<MultiIndex, RatFunc>> {
    let (span, kept) = PSpan::greedy(k, b)?;
    if kept.len() != b.len() {
        return Err(Error::NotPIndependent);
    }
    match span.coordinates(a)? {
        Some(v) => Ok(indexed(v, b.len(), k.p())),
        None => Err(Error::NotInSpan),
    }
}

pub type TermRef = Arc<LambdaTerm>;

/// Terms of the parameterized lambda language. Shared subterms are shared
/// `Arc`s; evaluation visits each node once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LambdaTerm {
    Var(String),
    Const(RatFunc),
    Add(Vec<TermRef>),
    Sub(TermRef, TermRef),
    Mul(Vec<TermRef>),
    Inv(TermRef),
    /// `l_{p,index}(arg, params)`.
    Lambda { p: u32, index: Vec<u32>, arg: TermRef, params: Vec<TermRef> },
}

impl LambdaTerm {
    pub fn var(name: impl Into<String>) -> TermRef {
        Arc::new(LambdaTerm::Var(name.into()))
    }

    pub fn constant(x: RatFunc) -> TermRef {
        Arc::new(LambdaTerm::Const(x))
    }

    pub fn lambda(p: u32, index: &MultiIndex, arg: TermRef, params: Vec<TermRef>) -> TermRef {
        Arc::new(LambdaTerm::Lambda { p, index: index.entries().to_vec(), arg, params })
    }

    /// Evaluates under `env`; lambda symbols outside their domain give zero.
    pub fn eval(self: &TermRef, k: &AmbientField, env: &HashMap<String, RatFunc>) -> Result<RatFunc> {
        TermEvaluator::new(k, env).eval(self)
    }

    pub fn to_sexpr(&self) -> String {
        let mut out = String::new();
        self.write_sexpr(&mut out);
        out
    }

    fn write_sexpr(&self, out: &mut String) {
        let list = |out: &mut String, head: &str, items: &[TermRef]| {
            out.push('(');
            out.push_str(head);
            for t in items {
                out.push(' ');
                t.write_sexpr(out);
            }
            out.push(')');
        };
        match self {
            LambdaTerm::Var(v) => out.push_str(v),
            LambdaTerm::Const(x) => {
                out.push('"');
                out.push_str(&x.to_string());
                out.push('"');
            }
            LambdaTerm::Add(ts) => list(out, "+", ts),
            LambdaTerm::Sub(a, b) => list(out, "-", &[a.clone(), b.clone()]),
            LambdaTerm::Mul(ts) => list(out, "*", ts),
            LambdaTerm::Inv(a) => list(out, "inv", std::slice::from_ref(a)),
            LambdaTerm::Lambda { p, index, arg, params } => {
                let idx: Vec<String> = index.iter().map(|i| i.to_string()).collect();
                out.push_str(&format!("(l {p} ({}) ", idx.join(" ")));
                arg.write_sexpr(out);
                out.push_str(" (");
                for (i, t) in params.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    t.write_sexpr(out);
                }
                out.push_str("))");
            }
        }
    }

    /// Parses the s-expression form; constants are quoted expressions in `k`.
    pub fn parse(src: &str, k: &AmbientField) -> Result<TermRef> {
        let tokens = tokenize(src)?;
        let mut pos = 0;
        let t = parse_term(&tokens, &mut pos, k)?;
        if pos != tokens.len() {
            return Err(sexpr_error(tokens[pos].1, "end of input"));
        }
        Ok(t)
    }
}

impl fmt::Display for LambdaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

struct TermEvaluator<'a> {
    k: &'a AmbientField,
    env: &'a HashMap<String, RatFunc>,
    memo: HashMap<*const LambdaTerm, RatFunc>,
    spans: HashMap<Vec<RatFunc>, Option<PSpan>>,
}

impl<'a> TermEvaluator<'a> {
    fn new(k: &'a AmbientField, env: &'a HashMap<String, RatFunc>) -> Self {
        TermEvaluator { k, env, memo: HashMap::new(), spans: HashMap::new() }
    }

    fn eval(&mut self, t: &TermRef) -> Result<RatFunc> {
        let key = Arc::as_ptr(t);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let v = match &**t {
            LambdaTerm::Var(name) => {
                self.env.get(name).cloned().ok_or_else(|| Error::UnknownVariable(name.clone()))?
            }
            LambdaTerm::Const(x) => x.clone(),
            LambdaTerm::Add(ts) => {
                let mut acc = self.k.zero();
                for s in ts {
                    acc = acc.add(&self.eval(s)?);
                }
                acc
            }
            LambdaTerm::Sub(a, b) => self.eval(a)?.sub(&self.eval(b)?),
            LambdaTerm::Mul(ts) => {
                let mut acc = self.k.one();
                for s in ts {
                    acc = acc.mul(&self.eval(s)?);
                }
                acc
            }
            LambdaTerm::Inv(a) => self.eval(a)?.inv()?,
            LambdaTerm::Lambda { p, index, arg, params } => {
                let x = self.eval(arg)?;
                let ys = params.iter().map(|s| self.eval(s)).collect::<Result<Vec<_>>>()?;
                self.apply_lambda(*p, index, &x, ys)?
            }
        };
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    fn apply_lambda(&mut self, p: u32, index: &[u32], x: &RatFunc, ys: Vec<RatFunc>) -> Result<RatFunc> {
        let zero = self.k.zero();
        if p != self.k.p() || index.len() != ys.len() || index.iter().any(|&i| i >= p) {
            return Ok(zero);
        }
        if !self.spans.contains_key(&ys) {
            let (span, kept) = PSpan::greedy(self.k, &ys)?;
            self.spans.insert(ys.clone(), (kept.len() == ys.len()).then_some(span));
        }
        let Some(span) = &self.spans[&ys] else { return Ok(zero) };
        let rank = MultiIndex::new(index.to_vec(), p).expect("entries checked").rank(p);
        Ok(span.coordinates(x)?.map_or(zero, |v| v[rank].clone()))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
    Quoted(String),
}

fn sexpr_error(position: usize, expected: &str) -> Error {
    Error::Parse { position, message: "malformed term".into(), expected: vec![expected.into()] }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((Tok::Open, pos));
                i += 1;
            }
            ')' => {
                out.push((Tok::Close, pos));
                i += 1;
            }
            '"' => {
                let end = chars[i + 1..].iter().position(|&(_, c)| c == '"').ok_or_else(|| sexpr_error(pos, "\""))?;
                let body: String = chars[i + 1..i + 1 + end].iter().map(|&(_, c)| c).collect();
                out.push((Tok::Quoted(body), pos));
                i += end + 2;
            }
            _ => {
                let start = i;
                while i < chars.len() && !chars[i].1.is_whitespace() && !"()\"".contains(chars[i].1) {
                    i += 1;
                }
                out.push((Tok::Atom(chars[start..i].iter().map(|&(_, c)| c).collect()), pos));
            }
        }
    }
    Ok(out)
}

fn parse_term(toks: &[(Tok, usize)], pos: &mut usize, k: &AmbientField) -> Result<TermRef> {
    let end = toks.last().map_or(0, |t| t.1 + 1);
    let Some((tok, at)) = toks.get(*pos).cloned() else { return Err(sexpr_error(end, "term")) };
    *pos += 1;
    match tok {
        Tok::Atom(name) => Ok(LambdaTerm::var(name)),
        Tok::Quoted(src) => Ok(LambdaTerm::constant(k.parse(&src)?)),
        Tok::Close => Err(sexpr_error(at, "term")),
        Tok::Open => {
            let head = match toks.get(*pos) {
                Some((Tok::Atom(h), _)) => h.clone(),
                _ => return Err(sexpr_error(at + 1, "operator")),
            };
            *pos += 1;
            let term = if head == "l" {
                let p = match toks.get(*pos) {
                    Some((Tok::Atom(a), at)) => a.parse::<u32>().map_err(|_| sexpr_error(*at, "prime"))?,
                    _ => return Err(sexpr_error(at, "prime")),
                };
                *pos += 1;
                let index = parse_list(toks, pos, parse_index_entry)?;
                let arg = parse_term(toks, pos, k)?;
                let params = parse_list(toks, pos, |t, at| parse_term(t, at, k))?;
                LambdaTerm::Lambda { p, index, arg, params }
            } else {
                let mut items = Vec::new();
                while !matches!(toks.get(*pos), Some((Tok::Close, _)) | None) {
                    items.push(parse_term(toks, pos, k)?);
                }
                match (head.as_str(), items.len()) {
                    ("+", _) => LambdaTerm::Add(items),
                    ("*", _) => LambdaTerm::Mul(items),
                    ("-", 2) => LambdaTerm::Sub(items[0].clone(), items[1].clone()),
                    ("inv", 1) => LambdaTerm::Inv(items[0].clone()),
                    _ => return Err(sexpr_error(at, "one of l, +, -, *, inv with matching arity")),
                }
            };
            match toks.get(*pos) {
                Some((Tok::Close, _)) => *pos += 1,
                Some((_, at)) => return Err(sexpr_error(*at, ")")),
                None => return Err(sexpr_error(end, ")")),
            }
            Ok(Arc::new(term))
        }
    }
}

/// Items of a parenthesised list, each read by `item`.
fn parse_list<T>(
    toks: &[(Tok, usize)],
    pos: &mut usize,
    mut item: impl FnMut(&[(Tok, usize)], &mut usize) -> Result<T>,
) -> Result<Vec<T>> {
    let end = toks.last().map_or(0, |t| t.1 + 1);
    match toks.get(*pos) {
        Some((Tok::Open, _)) => *pos += 1,
        Some((_, at)) => return Err(sexpr_error(*at, "(")),
        None => return Err(sexpr_error(end, "(")),
    }
    let mut items = Vec::new();
    loop {
        match toks.get(*pos) {
            Some((Tok::Close, _)) => {
                *pos += 1;
                return Ok(items);
            }
            Some(_) => items.push(item(toks, pos)?),
            None => return Err(sexpr_error(end, ")")),
        }
    }
}

fn parse_index_entry(toks: &[(Tok, usize)], pos: &mut usize) -> Result<u32> {
    let (tok, at) = &toks[*pos];
    *pos += 1;
    match tok {
        Tok::Atom(a) => a.parse::<u32>().map_err(|_| sexpr_error(*at, "index entry")),
        _ => Err(sexpr_error(*at, "index entry")),
    }
}

fn frobenius_all(xs: &[RatFunc]) -> Vec<RatFunc> {
    xs.iter().map(|x| x.frobenius()).collect()
}

/// Left-greedy p-basis of `E` over `D`: keeps a generator `g` of `E` iff
/// `g ∉ GF(q)(gens(E)^p, gens(D), kept)`.
pub fn relative_p_basis(e: &SubfieldPresentation, d: &SubfieldPresentation) -> Result<Vec<RatFunc>> {
    let base: Vec<RatFunc> = frobenius_all(e.gens()).into_iter().chain(d.gens().iter().cloned()).collect();
    let mut kept: Vec<RatFunc> = Vec::new();
    for g in e.gens() {
        let mut gens = base.clone();
        gens.extend(kept.iter().cloned());
        let sub = SubfieldPresentation::new(e.ambient(), gens)?;
        if !sub.contains(g)? {
            kept.push(g.clone());
        }
    }
    Ok(kept)
}

/// Left-greedy p-basis of `D` extracted from its generators.
pub fn p_basis(d: &SubfieldPresentation) -> Result<Vec<RatFunc>> {
    relative_p_basis(d, &SubfieldPresentation::base(d.ambient()))
}

/// `[D : D^(p)] = p^impdeg(D)`; always finite for finitely generated `D`.
pub fn impdeg(d: &SubfieldPresentation) -> Result<usize> {
    Ok(p_basis(d)?.len())
}

/// `[E : E^(p)D] = p^impdeg_rel`, for `D ≤ E`.
pub fn impdeg_rel(e: &SubfieldPresentation, d: &SubfieldPresentation) -> Result<usize> {
    if !crate::subfield::field_leq(d, e)? {
        return Err(Error::invalid("relative imperfection degree needs the base inside the extension"));
    }
    Ok(relative_p_basis(e, d)?.len())
}
