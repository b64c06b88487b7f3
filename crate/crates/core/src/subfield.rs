//! Finitely generated subfields `D = GF(q)(g1, ..., gk)` of the ambient
//! field, presented by generators.
//!
//! All questions are answered through one elimination: in
//! `GF(q)[w', w, t, z, y]` with block order `(w', w, t) >> z >> y`, the ideal
//! `<den(g_i)*y_i - num(g_i), w*D - 1, d*z - n, w'*d - 1>` (`D` the lcm of the
//! generator denominators, `x = n/d` the query) is the ideal of the graph of
//! `y -> g, z -> x`. Its reduced basis restricted to `(z, y)` is the reduced
//! basis of the relation ideal of `(g, x)`, and the members of smallest
//! positive `z`-degree `e` have leading `z`-coefficients that do not vanish
//! at `g`, so `e = [D(x) : D]`; when no member involves `z`, `x` is
//! transcendental over `D`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{AmbientField, RatFunc};
use crate::poly::{dimension_from_leading, gcd, Exps, GbPoly, Groebner, MPoly, MonomialOrder, PolyRing, RingRef};

/// Witness `x = num(g) / den(g)` with `num, den` in `GF(q)[y1..yk]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipWitness {
    pub num: MPoly,
    pub den: MPoly,
}

impl MembershipWitness {
    pub fn eval(&self, gens: &[RatFunc], k: &AmbientField) -> Result<RatFunc> {
        let n = self.num.eval(gens, &k.one());
        let d = self.den.eval(gens, &k.one());
        n.div(&d)
    }

    pub fn render(&self) -> String {
        if self.den.is_one() {
            self.num.to_string()
        } else {
            format!("({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Display for MembershipWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonMembership {
    /// The query is transcendental over the subfield.
    Transcendental,
    /// The query is algebraic of this degree (at least 2) over the subfield.
    AlgebraicOfDegree { degree: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes(MembershipWitness),
    No(NonMembership),
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalPolynomial {
    Transcendental,
    MinPoly {
        /// Coefficient of `X^j` at position `j`, each as an element of `D`; monic.
        coeffs: Vec<MembershipWitness>,
        degree: u32,
        separable: bool,
        /// The cleared relation `sum_j c_j(y) X^j` in `GF(q)[y1..yk, X]`.
        relation: MPoly,
    },
}

impl MinimalPolynomial {
    pub fn degree(&self) -> Option<u32> {
        match self {
            MinimalPolynomial::Transcendental => None,
            MinimalPolynomial::MinPoly { degree, .. } => Some(*degree),
        }
    }

    pub fn is_separable(&self) -> bool {
        matches!(self, MinimalPolynomial::MinPoly { separable: true, .. })
    }

    /// Coefficients evaluated in `K`, lowest degree first.
    pub fn eval_coeffs(&self, d: &SubfieldPresentation) -> Result<Vec<RatFunc>> {
        match self {
            MinimalPolynomial::Transcendental => Ok(Vec::new()),
            MinimalPolynomial::MinPoly { coeffs, .. } => {
                coeffs.iter().map(|w| w.eval(d.gens(), d.ambient())).collect()
            }
        }
    }
}

/// Relation ideal of the generators: the kernel of `y_i -> g_i`.
#[derive(Clone, Debug)]
pub struct RelationIdeal {
    pub ring: RingRef,
    /// Reduced Gröbner basis under grevlex on `y1..yk`.
    pub basis: Vec<MPoly>,
    pub trdeg: usize,
}

struct Layout {
    /// `_w2, [_w], t.., _z, _y..`
    ring: RingRef,
    order: MonomialOrder,
    has_w: bool,
    n: usize,
    k: usize,
}

impl Layout {
    fn w2(&self) -> usize {
        0
    }
    fn w(&self) -> usize {
        1
    }
    fn t(&self, i: usize) -> usize {
        1 + usize::from(self.has_w) + i
    }
    fn z(&self) -> usize {
        1 + usize::from(self.has_w) + self.n
    }
    fn y(&self, i: usize) -> usize {
        self.z() + 1 + i
    }
    fn elim_len(&self) -> usize {
        self.z()
    }
}

struct Relations {
    layout: Layout,
    /// Reduced basis of the generator graph ideal in the layout ring.
    graph: Vec<GbPoly>,
    relation: RelationIdeal,
}

/// `D = GF(q)(gens)`; caches are write-once and shared between clones.
#[derive(Clone)]
pub struct SubfieldPresentation {
    ambient: AmbientField,
    gens: Vec<RatFunc>,
    label: Option<String>,
    relations: Arc<OnceLock<Arc<Relations>>>,
    whole: Arc<OnceLock<bool>>,
}

impl fmt::Debug for SubfieldPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "{}({})", self.ambient.field().spec(), gens.join(", "))
    }
}

impl SubfieldPresentation {
    pub fn new(ambient: &AmbientField, gens: Vec<RatFunc>) -> Result<Self> {
        if gens.iter().any(|g| !crate::poly::same_ring(g.ring(), ambient.ring())) {
            return Err(Error::SpecMismatch);
        }
        Ok(SubfieldPresentation {
            ambient: ambient.clone(),
            gens,
            label: None,
            relations: Arc::default(),
            whole: Arc::default(),
        })
    }

    /// The prime-power field `GF(q)` itself.
    pub fn base(ambient: &AmbientField) -> Self {
        Self::new(ambient, Vec::new()).unwrap()
    }

    /// The ambient field, presented by its variables.
    pub fn whole(ambient: &AmbientField) -> Self {
        let s = Self::new(ambient, ambient.canonical_p_basis()).unwrap();
        let _ = s.whole.set(true);
        s
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn ambient(&self) -> &AmbientField {
        &self.ambient
    }

    pub fn gens(&self) -> &[RatFunc] {
        &self.gens
    }

    /// Presentation with extra generators appended.
    pub fn adjoin(&self, extra: &[RatFunc]) -> Self {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(extra);
        Self::new(&self.ambient, gens).unwrap()
    }

    /// Ring `GF(q)[y1..yk]` holding witnesses and relations.
    pub fn tag_ring(&self) -> RingRef {
        tag_ring(&self.ambient, self.gens.len(), "y")
    }

    fn relations(&self) -> Result<Arc<Relations>> {
        if let Some(r) = self.relations.get() {
            return Ok(r.clone());
        }
        let r = Arc::new(self.build_relations()?);
        let _ = self.relations.set(r.clone());
        Ok(self.relations.get().unwrap().clone())
    }

    fn build_relations(&self) -> Result<Relations> {
        let k = &self.ambient;
        let n = k.n();
        let mut lcm = MPoly::one(k.ring());
        for g in &self.gens {
            if !g.den().is_constant() {
                let c = gcd(&lcm, g.den());
                lcm = lcm.mul(&g.den().div_exact(&c).unwrap());
            }
        }
        let has_w = !lcm.is_constant();
        let mut names = vec!["_w2".to_string()];
        if has_w {
            names.push("_w".into());
        }
        names.extend(k.ring().vars().iter().cloned());
        names.push("_z".into());
        names.extend((1..=self.gens.len()).map(|i| format!("_y{i}")));
        let ring = PolyRing::new(k.field().clone(), names);
        let z_at = 1 + usize::from(has_w) + n;
        let layout = Layout {
            ring: ring.clone(),
            order: MonomialOrder::Block(vec![z_at, z_at + 1]),
            has_w,
            n,
            k: self.gens.len(),
        };
        let tmap: Vec<usize> = (0..n).map(|i| layout.t(i)).collect();
        let mut gens = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            let y = MPoly::var(&ring, layout.y(i));
            gens.push(y.mul(&g.den().map_ring(&ring, &tmap)).sub(&g.num().map_ring(&ring, &tmap)));
        }
        if has_w {
            let w = MPoly::var(&ring, layout.w());
            gens.push(w.mul(&lcm.map_ring(&ring, &tmap)).sub(&MPoly::one(&ring)));
        }
        let gb = Groebner::new(k.field(), &layout.order, k.limits());
        let graph = gb.basis(gens.iter().map(|g| gb.convert(g)).collect(), Vec::new())?;
        let tags = self.tag_ring();
        let rel: Vec<MPoly> = graph
            .iter()
            .filter(|g| free_of(g, layout.elim_len() + 1))
            .map(|g| project_tags(g, &layout, &tags))
            .collect();
        let leading: Vec<Exps> = rel.iter().map(|r| r.terms()[0].0.clone()).collect();
        let trdeg = dimension_from_leading(&leading, &(0..self.gens.len()).collect::<Vec<_>>()).unwrap_or(0);
        Ok(Relations { layout, graph, relation: RelationIdeal { ring: tags, basis: rel, trdeg } })
    }

    /// Reduced basis of the relation ideal of `(g, x)`, as polynomials in `z`
    /// with coefficients in the tag ring, sorted by increasing `z`-degree.
    fn adjoin_relations(&self, x: &RatFunc) -> Result<Vec<Vec<MPoly>>> {
        let rel = self.relations()?;
        let lay = &rel.layout;
        let ring = &lay.ring;
        let tmap: Vec<usize> = (0..lay.n).map(|i| lay.t(i)).collect();
        let z = MPoly::var(ring, lay.z());
        let mut extra = vec![z.mul(&x.den().map_ring(ring, &tmap)).sub(&x.num().map_ring(ring, &tmap))];
        if !x.den().is_constant() {
            let w2 = MPoly::var(ring, lay.w2());
            extra.push(w2.mul(&x.den().map_ring(ring, &tmap)).sub(&MPoly::one(ring)));
        }
        let k = &self.ambient;
        let gb = Groebner::new(k.field(), &lay.order, k.limits());
        let basis = gb.basis(extra.iter().map(|g| gb.convert(g)).collect(), rel.graph.clone())?;
        let tags = self.tag_ring();
        let mut out: Vec<Vec<MPoly>> = basis
            .iter()
            .filter(|g| free_of(g, lay.elim_len()))
            .filter(|g| g.terms.iter().any(|(e, _)| e[lay.z()] > 0))
            .map(|g| {
                let deg = g.terms.iter().map(|(e, _)| e[lay.z()]).max().unwrap() as usize;
                let mut coeffs: Vec<Vec<(Exps, u32)>> = vec![Vec::new(); deg + 1];
                for (e, c) in &g.terms {
                    coeffs[e[lay.z()] as usize].push((tag_exps(e, lay), *c));
                }
                coeffs.into_iter().map(|t| MPoly::from_terms(&tags, t)).collect::<Vec<_>>()
            })
            .collect();
        out.sort_by_key(|c| c.len());
        Ok(out)
    }

    /// The ambient field is contained in `D` (all variables are members).
    pub fn is_whole_ambient(&self) -> Result<bool> {
        if let Some(&w) = self.whole.get() {
            return Ok(w);
        }
        let mut all = true;
        for i in 0..self.ambient.n() {
            let t = self.ambient.var(i);
            if !self.gens.contains(&t) && !self.member(&t)?.is_yes() {
                all = false;
                break;
            }
        }
        let _ = self.whole.set(all);
        Ok(all)
    }

    /// Membership without a witness; short-circuits when `D = K`.
    pub fn contains(&self, x: &RatFunc) -> Result<bool> {
        if x.is_constant() || self.gens.contains(x) {
            return Ok(true);
        }
        if self.whole.get() == Some(&true) {
            return Ok(true);
        }
        Ok(self.member(x)?.is_yes())
    }

    /// Decides `x ∈ D`; a positive answer carries a re-checked witness.
    pub fn member(&self, x: &RatFunc) -> Result<Membership> {
        let tags = self.tag_ring();
        if x.is_constant() {
            let c = x.num().constant_value().unwrap();
            return Ok(Membership::Yes(MembershipWitness { num: MPoly::constant(&tags, c), den: MPoly::one(&tags) }));
        }
        if let Some(i) = self.gens.iter().position(|g| g == x) {
            return Ok(Membership::Yes(MembershipWitness { num: MPoly::var(&tags, i), den: MPoly::one(&tags) }));
        }
        let rels = self.adjoin_relations(x)?;
        match rels.first() {
            None => Ok(Membership::No(NonMembership::Transcendental)),
            Some(c) if c.len() == 2 => {
                let w = MembershipWitness { num: c[0].neg(), den: c[1].clone() };
                if w.eval(&self.gens, &self.ambient)? != *x {
                    return Err(Error::invalid("membership witness failed verification"));
                }
                Ok(Membership::Yes(w))
            }
            Some(c) => Ok(Membership::No(NonMembership::AlgebraicOfDegree { degree: c.len() as u32 - 1 })),
        }
    }

    pub fn relation_ideal(&self) -> Result<RelationIdeal> {
        Ok(self.relations()?.relation.clone())
    }

    /// Transcendence degree over `GF(q)`, from the staircase of the relation ideal.
    pub fn trdeg(&self) -> Result<usize> {
        Ok(self.relations()?.relation.trdeg)
    }

    pub fn minimal_polynomial(&self, x: &RatFunc) -> Result<MinimalPolynomial> {
        let tags = self.tag_ring();
        let coeffs: Vec<MPoly> = if x.is_constant() {
            let c = x.num().constant_value().unwrap();
            vec![MPoly::constant(&tags, self.ambient.field().neg(c)), MPoly::one(&tags)]
        } else {
            match self.adjoin_relations(x)?.into_iter().next() {
                None => return Ok(MinimalPolynomial::Transcendental),
                Some(c) => c,
            }
        };
        let degree = coeffs.len() as u32 - 1;
        let p = self.ambient.p();
        let lead = coeffs.last().unwrap().clone();
        let separable = coeffs.iter().enumerate().any(|(j, c)| !(j as u32).is_multiple_of(p) && !c.is_zero());
        let rel_ring = {
            let mut names: Vec<String> = tags.vars().to_vec();
            names.push("X".into());
            PolyRing::new(self.ambient.field().clone(), names)
        };
        let k = tags.nvars();
        let id: Vec<usize> = (0..k).collect();
        let xvar = MPoly::var(&rel_ring, k);
        let relation = coeffs
            .iter()
            .enumerate()
            .fold(MPoly::zero(&rel_ring), |acc, (j, c)| acc.add(&c.map_ring(&rel_ring, &id).mul(&xvar.pow(j as u64))));
        let coeffs = coeffs
            .into_iter()
            .map(|c| MembershipWitness { num: c, den: lead.clone() })
            .collect();
        Ok(MinimalPolynomial::MinPoly { coeffs, degree, separable, relation })
    }

    /// `x` is separably algebraic over `D`.
    pub fn is_separably_algebraic(&self, x: &RatFunc) -> Result<bool> {
        Ok(self.minimal_polynomial(x)?.is_separable())
    }
}

pub(crate) fn tag_ring(k: &AmbientField, count: usize, prefix: &str) -> RingRef {
    PolyRing::new(k.field().clone(), (1..=count).map(|i| format!("{prefix}{i}")).collect())
}

fn free_of(g: &GbPoly, upto: usize) -> bool {
    g.terms.iter().all(|(e, _)| e[..upto].iter().all(|&x| x == 0))
}

fn tag_exps(e: &[u32], lay: &Layout) -> Exps {
    (0..lay.k).map(|i| e[lay.y(i)]).collect()
}

fn project_tags(g: &GbPoly, lay: &Layout, tags: &RingRef) -> MPoly {
    MPoly::from_terms(tags, g.terms.iter().map(|(e, c)| (tag_exps(e, lay), *c)).collect())
}

/// Every generator of `d1` lies in `d2`.
pub fn field_leq(d1: &SubfieldPresentation, d2: &SubfieldPresentation) -> Result<bool> {
    if d1.ambient() != d2.ambient() {
        return Err(Error::SpecMismatch);
    }
    for g in d1.gens() {
        if !d2.contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn field_equal(d1: &SubfieldPresentation, d2: &SubfieldPresentation) -> Result<bool> {
    Ok(field_leq(d1, d2)? && field_leq(d2, d1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Fq;

    fn k2(vars: &[&str]) -> AmbientField {
        AmbientField::new(Fq::prime(2).unwrap(), vars).unwrap()
    }

    fn sub(k: &AmbientField, gens: &[&str]) -> SubfieldPresentation {
        SubfieldPresentation::new(k, k.parse_tuple(gens).unwrap()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let k = k2(&["t"]);
        let d = sub(&k, &["t^2"]);
        match d.member(&k.parse("t^4").unwrap()).unwrap() {
            Membership::Yes(w) => {
                assert_eq!(w.num.to_string(), "y1^2");
                assert!(w.den.is_one());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            d.member(&k.var(0)).unwrap(),
            Membership::No(NonMembership::AlgebraicOfDegree { degree: 2 })
        );
        let d = sub(&k, &["t^3 + t", "1/(t+1)"]);
        match d.member(&k.parse("1/(t+1)").unwrap()).unwrap() {
            Membership::Yes(w) => assert_eq!(w.num.to_string(), "y2"),
            other => panic!("{other:?}"),
        }
        // t = 1/y2 + 1
        match d.member(&k.var(0)).unwrap() {
            Membership::Yes(w) => assert_eq!(w.eval(d.gens(), &k).unwrap(), k.var(0)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comparisons() {
        let k = k2(&["t"]);
        let d4 = sub(&k, &["t^4"]);
        let d2 = sub(&k, &["t^2"]);
        assert!(field_leq(&d4, &d2).unwrap());
        assert!(!field_leq(&d2, &d4).unwrap());
        assert!(field_leq(&d2, &d2).unwrap());
        let e = sub(&k, &["t^2 + t", "t"]);
        assert!(field_equal(&e, &SubfieldPresentation::whole(&k)).unwrap());
    }

    #[test]
    fn relations_and_trdeg() {
        let k = k2(&["t"]);
        let d = sub(&k, &["t", "t^2"]);
        let r = d.relation_ideal().unwrap();
        assert_eq!(r.basis.len(), 1);
        assert_eq!(r.basis[0].to_string(), "y1^2 + y2");
        assert_eq!(r.trdeg, 1);
        let d = sub(&k, &["t^2"]);
        assert!(d.relation_ideal().unwrap().basis.is_empty());
        assert_eq!(d.trdeg().unwrap(), 1);
        let d = SubfieldPresentation::base(&k);
        assert_eq!(d.trdeg().unwrap(), 0);
        assert!(d.relation_ideal().unwrap().basis.is_empty());
    }

    #[test]
    fn minimal_polynomial_examples() {
        let k = k2(&["t"]);
        let d = sub(&k, &["t^2"]);
        let mp = d.minimal_polynomial(&k.var(0)).unwrap();
        assert_eq!(mp.degree(), Some(2));
        assert!(!mp.is_separable());
        let c = mp.eval_coeffs(&d).unwrap();
        assert_eq!(c, vec![k.parse("t^2").unwrap(), k.zero(), k.one()]);

        let d = sub(&k, &["t^2 + t"]);
        let mp = d.minimal_polynomial(&k.var(0)).unwrap();
        assert!(mp.is_separable());
        assert_eq!(mp.eval_coeffs(&d).unwrap(), vec![k.parse("t^2+t").unwrap(), k.one(), k.one()]);

        let k = k2(&["s", "t"]);
        let d = sub(&k, &["s"]);
        assert_eq!(d.minimal_polynomial(&k.var(1)).unwrap(), MinimalPolynomial::Transcendental);
    }
}
