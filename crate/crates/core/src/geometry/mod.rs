//! Loci, tool presentations, separating transcendence splits, Newton
//! lifting over truncated series, local surjectivity sampling, and the
//! interior scan.

mod interior;
mod newton;
mod series;
mod surjectivity;

pub use interior::{interior_image, interior_residues, interior_scan, CosetLevel, InteriorReport, MAX_IMAGES};
pub use newton::{hensel_newton, NewtonOutcome, NewtonSystem};
pub use series::TruncSeries;
pub use surjectivity::{local_surjectivity_check, SurjectivityMode, SurjectivityParams, SurjectivityReport};

use crate::error::{Error, Result};
use crate::field::{AmbientField, RatFunc};
use crate::poly::{MPoly, PolyRing, RingRef};
use crate::subfield::{MinimalPolynomial, SubfieldPresentation};

/// An ideal of `GF(q)[y, x]`: `y1..yk` stand for the base generators and
/// `x1..xm` for the point's coordinates.
#[derive(Clone, Debug)]
pub struct AffineIdeal {
    pub ring: RingRef,
    pub base_tags: usize,
    /// Reduced Gröbner basis, grevlex.
    pub basis: Vec<MPoly>,
    /// `trdeg(C(a)/C)`.
    pub dimension: usize,
}

impl AffineIdeal {
    /// Every generator vanishes at `(base gens, point)`.
    pub fn vanishes_at<A: crate::poly::Algebra>(&self, values: &[A], one: &A, is_zero: impl Fn(&A) -> bool) -> bool {
        self.basis.iter().all(|g| is_zero(&g.eval(values, one)))
    }
}

fn rename(poly: &MPoly, ring: &RingRef) -> MPoly {
    poly.map_ring(ring, &(0..poly.ring().nvars()).collect::<Vec<_>>())
}

/// The ideal of all polynomial relations of `a` over `base`.
pub fn locus(a: &[RatFunc], base: &SubfieldPresentation) -> Result<AffineIdeal> {
    let k = base.ambient();
    let joint = base.adjoin(a);
    let rel = joint.relation_ideal()?;
    let ring = locus_ring(k, base.gens().len(), a.len());
    Ok(AffineIdeal {
        basis: rel.basis.iter().map(|g| rename(g, &ring)).collect(),
        dimension: rel.trdeg - base.trdeg()?,
        base_tags: base.gens().len(),
        ring,
    })
}

fn locus_ring(k: &AmbientField, tags: usize, coords: usize) -> RingRef {
    let names = (1..=tags).map(|i| format!("y{i}")).chain((1..=coords).map(|i| format!("x{i}"))).collect();
    PolyRing::new(k.field().clone(), names)
}

/// `b = b1 ⌢ b2` by positions: `b1` algebraically independent over `D`,
/// every entry of `b2` separably algebraic over `D(b1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SepSplit {
    pub transcendental: Vec<usize>,
    pub algebraic: Vec<usize>,
}

fn pick(b: &[RatFunc], idx: &[usize]) -> Vec<RatFunc> {
    idx.iter().map(|&i| b[i].clone()).collect()
}

fn independent_over(b: &[RatFunc], idx: &[usize], d: &SubfieldPresentation) -> Result<bool> {
    for (n, &i) in idx.iter().enumerate() {
        let below = d.adjoin(&pick(b, &idx[..n]));
        if below.minimal_polynomial(&b[i])? != MinimalPolynomial::Transcendental {
            return Ok(false);
        }
    }
    Ok(true)
}

fn rest_separable(b: &[RatFunc], idx: &[usize], d: &SubfieldPresentation) -> Result<bool> {
    let over = d.adjoin(&pick(b, idx));
    for (i, x) in b.iter().enumerate() {
        if !idx.contains(&i) && !over.is_separably_algebraic(x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Greedy separating transcendence split; for `|b| ≤ 4` every subset of the
/// right size is tried before giving up.
pub fn sep_trans_split(b: &[RatFunc], d: &SubfieldPresentation) -> Result<Option<SepSplit>> {
    let mut free: Vec<usize> = Vec::new();
    for (i, x) in b.iter().enumerate() {
        if d.adjoin(&pick(b, &free)).minimal_polynomial(x)? == MinimalPolynomial::Transcendental {
            free.push(i);
        }
    }
    let split = |free: Vec<usize>| SepSplit { algebraic: (0..b.len()).filter(|i| !free.contains(i)).collect(), transcendental: free };
    if rest_separable(b, &free, d)? {
        return Ok(Some(split(free)));
    }
    if b.len() <= 4 {
        for mask in 0u32..1 << b.len() {
            if mask.count_ones() as usize != free.len() {
                continue;
            }
            let idx: Vec<usize> = (0..b.len()).filter(|i| mask & (1 << i) != 0).collect();
            if independent_over(b, &idx, d)? && rest_separable(b, &idx, d)? {
                return Ok(Some(split(idx)));
            }
        }
    }
    Ok(None)
}

/// `g_j / h_j` with `g_j(.., X_j)` the cleared minimal polynomial of `a_j`
/// over `D(a_1..a_{j-1})`; `(0, 1)` for transcendental entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToolEntry {
    pub g: MPoly,
    pub h: MPoly,
    pub degree: Option<u32>,
    pub separable: bool,
}

/// Polynomials live in `GF(q)[y1..yk, X1..Xm]`, `y` standing for `gens(D)`.
#[derive(Clone, Debug)]
pub struct ToolPresentation {
    pub ring: RingRef,
    pub base_tags: usize,
    pub entries: Vec<ToolEntry>,
}

pub fn tool_presentation(a: &[RatFunc], d: &SubfieldPresentation) -> Result<ToolPresentation> {
    let k = d.ambient();
    let tags = d.gens().len();
    let names = (1..=tags).map(|i| format!("y{i}")).chain((1..=a.len()).map(|i| format!("X{i}"))).collect();
    let ring = PolyRing::new(k.field().clone(), names);
    let mut entries = Vec::new();
    for j in 0..a.len() {
        let below = d.adjoin(&a[..j]);
        let entry = match below.minimal_polynomial(&a[j])? {
            MinimalPolynomial::Transcendental => ToolEntry {
                g: MPoly::zero(&ring),
                h: MPoly::one(&ring),
                degree: None,
                separable: false,
            },
            MinimalPolynomial::MinPoly { coeffs, degree, separable, relation } => ToolEntry {
                g: rename(&relation, &ring),
                h: rename(&coeffs.last().expect("monic").num, &ring),
                degree: Some(degree),
                separable,
            },
        };
        entries.push(entry);
    }
    Ok(ToolPresentation { ring, base_tags: tags, entries })
}

/// Image of `x` under `t_i -> center_i + T^(i+1)`, modulo `T^precision`.
pub fn embed(k: &AmbientField, x: &RatFunc, center: &[u32], precision: usize) -> Result<TruncSeries> {
    let f = k.field();
    let one = TruncSeries::one(f, precision);
    let vals: Vec<TruncSeries> = center
        .iter()
        .enumerate()
        .map(|(i, &c)| TruncSeries::constant(f, precision, c).add(&TruncSeries::monomial(f, precision, f.one(), i + 1)))
        .collect();
    let den = x.den().eval(&vals, &one);
    if !den.is_unit() {
        return Err(Error::DenominatorVanishes);
    }
    Ok(x.num().eval(&vals, &one).mul(&den.inv()?))
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

    #[test]
    fn locus_examples() {
        let k = field(&["t"]);
        let f2 = SubfieldPresentation::base(&k);
        let l = locus(&tuple(&k, &["t", "t^2"]), &f2).unwrap();
        assert_eq!(l.basis.iter().map(|g| g.to_string()).collect::<Vec<_>>(), ["x1^2 + x2"]);
        assert_eq!(l.dimension, 1);
        let l = locus(&tuple(&k, &["1/(t+1)", "t"]), &f2).unwrap();
        assert_eq!(l.basis.iter().map(|g| g.to_string()).collect::<Vec<_>>(), ["x1*x2 + x1 + 1"]);
        let l = locus(&tuple(&k, &["t"]), &f2).unwrap();
        assert!(l.basis.is_empty());
        assert_eq!(l.dimension, 1);
    }

    #[test]
    fn split_examples() {
        let k = field(&["t"]);
        let d = SubfieldPresentation::new(&k, tuple(&k, &["t^2 + t"])).unwrap();
        let s = sep_trans_split(&[k.var(0)], &d).unwrap().unwrap();
        assert_eq!((s.transcendental, s.algebraic), (vec![], vec![0]));
        let d = SubfieldPresentation::new(&k, tuple(&k, &["t^2"])).unwrap();
        assert_eq!(sep_trans_split(&[k.var(0)], &d).unwrap(), None);
        // greedy picks t^2 first, the fallback finds t
        let s = sep_trans_split(&tuple(&k, &["t^2", "t"]), &SubfieldPresentation::base(&k)).unwrap().unwrap();
        assert_eq!((s.transcendental, s.algebraic), (vec![1], vec![0]));
        let k = field(&["s", "t"]);
        let s = sep_trans_split(&tuple(&k, &["s", "t"]), &SubfieldPresentation::base(&k)).unwrap().unwrap();
        assert_eq!((s.transcendental, s.algebraic), (vec![0, 1], vec![]));
    }

    #[test]
    fn tool_examples() {
        let k = field(&["t"]);
        let f2 = SubfieldPresentation::base(&k);
        let render = |tp: &ToolPresentation| -> Vec<(String, String)> {
            tp.entries.iter().map(|e| (e.g.to_string(), e.h.to_string())).collect()
        };
        let tp = tool_presentation(&tuple(&k, &["t", "t^2"]), &f2).unwrap();
        assert_eq!(render(&tp), [("0".into(), "1".into()), ("X1^2 + X2".into(), "1".into())]);
        let tp = tool_presentation(&tuple(&k, &["t^2", "t"]), &f2).unwrap();
        assert_eq!(render(&tp), [("0".into(), "1".into()), ("X2^2 + X1".into(), "1".into())]);
        let k = field(&["s", "t"]);
        let tp = tool_presentation(&tuple(&k, &["s", "t"]), &SubfieldPresentation::base(&k)).unwrap();
        assert!(tp.entries.iter().all(|e| e.g.is_zero() && e.h.is_one()));
    }

    #[test]
    fn embedding() {
        let k = field(&["t"]);
        let x = k.parse("1/(t+1)").unwrap();
        let s = embed(&k, &x, &[0], 5).unwrap();
        assert_eq!(s.to_string(), "1 + t + t^2 + t^3 + t^4");
        assert_eq!(embed(&k, &x, &[1], 5), Err(Error::DenominatorVanishes));
    }
}
