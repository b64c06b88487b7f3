use super::{AmbientField, RatFunc};
use crate::multiindex::MultiIndex;
use crate::poly::{p_power_decompose, MPoly};

/// Coordinates of `x` over `K^(p)` in the canonical p-monomial basis:
/// `x = sum_I t^I * coords[I]^p`, stored by index rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PCoordinates {
    p: u32,
    n: usize,
    coords: Vec<RatFunc>,
}

impl PCoordinates {
    pub fn get(&self, idx: &MultiIndex) -> &RatFunc {
        &self.coords[idx.rank(self.p)]
    }

    pub fn as_slice(&self) -> &[RatFunc] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<RatFunc> {
        self.coords
    }

    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, &RatFunc)> {
        let (n, p) = (self.n, self.p);
        self.coords.iter().enumerate().map(move |(r, c)| (MultiIndex::from_rank(r, n, p), c))
    }

    pub fn support(&self) -> Vec<MultiIndex> {
        self.iter().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()
    }

    pub fn reconstruct(&self, k: &AmbientField) -> RatFunc {
        let mut acc = k.zero();
        for (idx, c) in self.iter() {
            if c.is_zero() {
                continue;
            }
            let mut mono = c.frobenius();
            for (i, &e) in idx.entries().iter().enumerate() {
                if e > 0 {
                    mono = mono.mul(&k.var(i).pow(e as u64));
                }
            }
            acc = acc.add(&mono);
        }
        acc
    }
}

/// Writes `x = f/g` as `f*g^(p-1) / g^p` and decomposes the numerator.
pub fn p_coordinates(k: &AmbientField, x: &RatFunc) -> PCoordinates {
    let p = k.p();
    let n = k.n();
    let mut coords = vec![k.zero(); MultiIndex::count(n, p)];
    let den = x.den();
    let num: MPoly = if den.is_one() { x.num().clone() } else { x.num().mul(&den.pow(p as u64 - 1)) };
    for (idx, piece) in p_power_decompose(&num) {
        coords[idx.rank(p)] = RatFunc::new(piece, den.clone()).expect("nonzero denominator");
    }
    PCoordinates { p, n, coords }
}

/// The `p`-th root of `x` inside `K`, or `None` when `x` is not a `p`-th power.
pub fn pth_root(x: &RatFunc) -> Option<RatFunc> {
    let root = |poly: &MPoly| -> Option<MPoly> {
        if poly.is_zero() {
            return Some(poly.clone());
        }
        let mut parts = p_power_decompose(poly);
        if parts.len() != 1 {
            return None;
        }
        let (idx, piece) = parts.pop_first().unwrap();
        idx.is_zero().then_some(piece)
    };
    let num = root(x.num())?;
    let den = root(x.den())?;
    RatFunc::new(num, den).ok()
}
