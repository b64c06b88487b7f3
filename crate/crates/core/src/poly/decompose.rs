use std::collections::BTreeMap;

use super::{Exps, MPoly};
use crate::multiindex::MultiIndex;

/// Writes `u = sum_I t^I * u_I^p` over the ring's variables, grouping
/// monomials by exponent residues mod `p` and taking `p`-th roots of the
/// coefficients. Only nonzero pieces appear in the map.
pub fn p_power_decompose(u: &MPoly) -> BTreeMap<MultiIndex, MPoly> {
    let field = u.field().clone();
    let p = field.p();
    let mut buckets: BTreeMap<MultiIndex, Vec<(Exps, u32)>> = BTreeMap::new();
    for (e, c) in u.terms() {
        let idx: Vec<u32> = e.iter().map(|&x| x % p).collect();
        let root: Exps = e.iter().map(|&x| x / p).collect();
        buckets
            .entry(MultiIndex::new(idx, p).unwrap())
            .or_default()
            .push((root, field.frobenius_inv(*c)));
    }
    buckets
        .into_iter()
        .map(|(k, terms)| (k, MPoly::from_terms(u.ring(), terms)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn examples() {
        let r = ring(2, &["t"]);
        let t = MPoly::var(&r, 0);
        let one = MPoly::one(&r);
        let u = t.pow(3).add(&t.pow(2)).add(&one);
        let d = p_power_decompose(&u);
        assert_eq!(d[&MultiIndex::new(vec![0], 2).unwrap()], t.add(&one));
        assert_eq!(d[&MultiIndex::new(vec![1], 2).unwrap()], t);
        let d = p_power_decompose(&t.pow(2));
        assert_eq!(d.len(), 1);
        assert_eq!(d[&MultiIndex::zero(1)], t);

        let r3 = ring(3, &["s", "t"]);
        let st = MPoly::var(&r3, 0).mul(&MPoly::var(&r3, 1));
        let d = p_power_decompose(&st);
        assert_eq!(d.len(), 1);
        assert!(d[&MultiIndex::new(vec![1, 1], 3).unwrap()].is_one());
    }
}
