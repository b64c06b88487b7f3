//! Helpers shared by the integration tests: seeded generators and a few
//! oracles that deliberately avoid the library's Gröbner and p-span code.
#![allow(dead_code)]

use plambda::field::{AmbientField, RatFunc};
use plambda::ff::Fq;
use plambda::poly::MPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ambient(field: &str, vars: &[&str]) -> AmbientField {
    AmbientField::new(Fq::parse(field).unwrap(), vars).unwrap()
}

pub fn el(k: &AmbientField, src: &str) -> RatFunc {
    k.parse(src).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn els(k: &AmbientField, srcs: &[&str]) -> Vec<RatFunc> {
    srcs.iter().map(|s| el(k, s)).collect()
}

/// Up to `terms` random monomials with every exponent at most `deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, k: &AmbientField, terms: usize, deg: u32) -> MPoly {
    let ring = k.ring();
    let q = k.field().q();
    let raw = (0..rng.gen_range(1..=terms))
        .map(|_| {
            let exps = (0..k.n()).map(|_| rng.gen_range(0..=deg)).collect::<Vec<u32>>();
            (exps.into(), rng.gen_range(1..q))
        })
        .collect();
    MPoly::from_terms(ring, raw)
}

pub fn random_nonzero_poly(rng: &mut ChaCha8Rng, k: &AmbientField, terms: usize, deg: u32) -> MPoly {
    loop {
        let p = random_poly(rng, k, terms, deg);
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random quotient; the denominator is `1` about half of the time.
pub fn random_ratfunc(rng: &mut ChaCha8Rng, k: &AmbientField, terms: usize, deg: u32) -> RatFunc {
    let num = random_poly(rng, k, terms, deg);
    if rng.gen_bool(0.5) {
        return RatFunc::from_poly(num);
    }
    let den = random_nonzero_poly(rng, k, terms.min(2), deg);
    RatFunc::new(num, den).unwrap()
}

/// `∂x/∂t_var` by the quotient rule.
pub fn partial(x: &RatFunc, var: usize) -> RatFunc {
    let (n, d) = (x.num(), x.den());
    let top = n.derivative(var).mul(d).sub(&n.mul(&d.derivative(var)));
    RatFunc::new(top, d.mul(d)).unwrap()
}

/// Rank over `K` of the Jacobian `(∂b_i/∂t_j)`. For `K = GF(q)(t)` this
/// equals the p-rank of `b` over the constants.
pub fn jacobian_rank(b: &[RatFunc], n: usize) -> usize {
    let mut rows: Vec<Vec<RatFunc>> = b.iter().map(|x| (0..n).map(|j| partial(x, j)).collect()).collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inv().unwrap();
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].mul(&inv);
            let pivot = rows[rank].clone();
            for (x, y) in rows[r].iter_mut().zip(&pivot) {
                *x = x.sub(&f.mul(y));
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of a dense `GF(2)` matrix whose rows are bit vectors.
pub fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let words = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for bit in 0..words * 64 {
        let (w, m) = (bit / 64, 1u64 << (bit % 64));
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][w] & m != 0) else { continue };
        rows.swap(rank, piv);
        for r in 0..rows.len() {
            if r != rank && rows[r][w] & m != 0 {
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}
