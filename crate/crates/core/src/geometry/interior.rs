use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::TruncSeries;
use crate::error::{Error, Result};
use crate::ff::Fq;
use crate::par::{self, Exec};

/// Enumerations larger than this abort with `ResourceLimit`.
pub const MAX_IMAGES: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetLevel {
    pub m: usize,
    /// A coset `c + T^m * GF(p)[T]/(T^N)` has `p^coset_exponent` elements.
    pub coset_exponent: usize,
    /// The coset is small enough to fit inside the residue set.
    pub feasible: bool,
    pub full_cosets: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InteriorReport {
    pub p: u32,
    pub precision: usize,
    pub ybound: usize,
    pub images: u64,
    pub residues: usize,
    pub levels: Vec<CosetLevel>,
    pub full_coset_found: bool,
}

/// The polynomial with base-`p` digits of `index` as coefficients.
pub(crate) fn digits_series(f: &Fq, precision: usize, mut index: u64, len: usize) -> TruncSeries {
    let p = f.p() as u64;
    let coeffs: Vec<u32> = (0..len)
        .map(|_| {
            let d = (index % p) as u32;
            index /= p;
            d
        })
        .collect();
    TruncSeries::from_coeffs(f, precision, &coeffs)
}

/// `y^p + T*y^(2p) mod T^N`.
pub fn interior_image(y: &TruncSeries) -> TruncSeries {
    let f = y.field();
    let p = f.p() as u64;
    let yp = y.pow(p);
    let t = TruncSeries::monomial(f, y.precision(), f.one(), 1);
    yp.add(&t.mul(&yp.mul(&yp)))
}

/// Distinct residues of `y^p + T*y^(2p)` over all `y` of degree below `ybound`.
pub fn interior_residues(p: u32, precision: usize, ybound: usize, exec: Exec) -> Result<BTreeSet<Vec<u32>>> {
    let f = Fq::prime(p)?;
    let count = (p as u64)
        .checked_pow(ybound as u32)
        .filter(|&c| c <= MAX_IMAGES)
        .ok_or(Error::ResourceLimit { what: "interior-scan images", limit: MAX_IMAGES })?;
    let images = par::map_range(exec, count as usize, |i| {
        interior_image(&digits_series(&f, precision, i as u64, ybound)).coeffs().to_vec()
    });
    Ok(images.into_iter().collect())
}

/// Enumerates the image family and reports, for each `m < N`, how many
/// cosets `c + T^m * (all residues)` lie entirely inside it.
pub fn interior_scan(p: u32, precision: usize, ybound: usize, exec: Exec) -> Result<InteriorReport> {
    let residues = interior_residues(p, precision, ybound, exec)?;
    let size = residues.len();
    let mut levels = Vec::new();
    for m in 0..precision {
        let exponent = precision - m;
        let coset = (p as u128).checked_pow(exponent as u32);
        let feasible = coset.is_some_and(|c| c <= size as u128);
        let full_cosets = if feasible {
            let mut classes: BTreeMap<&[u32], u128> = BTreeMap::new();
            for r in &residues {
                *classes.entry(&r[..m]).or_default() += 1;
            }
            classes.values().filter(|&&c| Some(c) == coset).count()
        } else {
            0
        };
        levels.push(CosetLevel { m, coset_exponent: exponent, feasible, full_cosets });
    }
    Ok(InteriorReport {
        p,
        precision,
        ybound,
        images: (p as u64).pow(ybound as u32),
        residues: size,
        full_coset_found: levels.iter().any(|l| l.full_cosets > 0),
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_cases() {
        let s = interior_residues(2, 2, 1, Exec::Sequential).unwrap();
        assert_eq!(s, BTreeSet::from([vec![0, 0], vec![1, 1]]));
        let r = interior_scan(2, 2, 1, Exec::Sequential).unwrap();
        assert_eq!(r.residues, 2);
        assert!(!r.full_coset_found);
        assert!(r.levels[1].feasible);
        let r = interior_scan(2, 4, 0, Exec::Sequential).unwrap();
        assert_eq!((r.residues, r.full_coset_found), (1, false));
    }

    #[test]
    fn no_interior_at_moderate_size() {
        let r = interior_scan(2, 12, 6, Exec::Sequential).unwrap();
        assert!(r.residues <= 64);
        assert!(!r.full_coset_found);
        assert_eq!(interior_scan(2, 12, 6, Exec::Parallel).unwrap(), r);
    }
}
