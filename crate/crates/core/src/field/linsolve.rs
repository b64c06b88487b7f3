//! Exact linear systems over `K` by fraction-free Gauss–Jordan elimination
//! on denominator-cleared rows, with row content stripped after every update.

use super::RatFunc;
use crate::error::{Error, Result};
use crate::poly::{gcd, gcd_many, MPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<RatFunc>),
    NoSolution,
    /// One particular solution and a basis of the kernel.
    Underdetermined { particular: Vec<RatFunc>, kernel: Vec<Vec<RatFunc>> },
}

fn clear_row(row: &[RatFunc]) -> Vec<MPoly> {
    let ring = row[0].ring().clone();
    let mut l = MPoly::one(&ring);
    for x in row {
        if !x.den().is_one() {
            let g = gcd(&l, x.den());
            l = l.mul(&x.den().div_exact(&g).unwrap());
        }
    }
    let polys: Vec<MPoly> = row.iter().map(|x| x.num().mul(&l.div_exact(x.den()).unwrap())).collect();
    strip(polys)
}

fn strip(row: Vec<MPoly>) -> Vec<MPoly> {
    match gcd_many(row.iter().filter(|p| !p.is_zero())) {
        Some(g) if !g.is_one() => row.iter().map(|p| p.div_exact(&g).unwrap()).collect(),
        _ => row,
    }
}

/// Solves `m * x = v`.
pub fn linear_solve(m: &[Vec<RatFunc>], v: &[RatFunc]) -> Result<LinearSolution> {
    if m.len() != v.len() {
        return Err(Error::invalid("row count of matrix and right-hand side differ"));
    }
    let ncols = m.first().map_or(0, |r| r.len());
    if m.iter().any(|r| r.len() != ncols) {
        return Err(Error::invalid("ragged matrix"));
    }
    let ring = match v.first() {
        Some(x) => x.ring().clone(),
        None => return Ok(LinearSolution::Unique(Vec::new())),
    };
    let mut rows: Vec<Vec<MPoly>> = m
        .iter()
        .zip(v)
        .map(|(r, b)| {
            let mut full = r.clone();
            full.push(b.clone());
            clear_row(&full)
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let pick = (rank..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| (rows[i][col].total_degree(), rows[i][col].num_terms(), i));
        let Some(pr) = pick else { continue };
        rows.swap(rank, pr);
        let piv = rows[rank][col].clone();
        for i in 0..rows.len() {
            if i == rank || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            let g = gcd(&piv, &factor);
            let (a, b) = (piv.div_exact(&g).unwrap(), factor.div_exact(&g).unwrap());
            let updated: Vec<MPoly> = rows[i]
                .iter()
                .zip(&rows[rank])
                .map(|(x, y)| x.mul(&a).sub(&y.mul(&b)))
                .collect();
            rows[i] = strip(updated);
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[ncols].is_zero()) {
        return Ok(LinearSolution::NoSolution);
    }
    let zero = RatFunc::zero(&ring);
    let ratio = |n: &MPoly, d: &MPoly| RatFunc::new(n.clone(), d.clone()).expect("pivot nonzero");
    let mut particular = vec![zero.clone(); ncols];
    for (k, &c) in pivots.iter().enumerate() {
        particular[c] = ratio(&rows[k][ncols], &rows[k][c]);
    }
    if rank == ncols {
        return Ok(LinearSolution::Unique(particular));
    }
    let kernel = (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut vec = vec![zero.clone(); ncols];
            vec[free] = RatFunc::one(&ring);
            for (k, &c) in pivots.iter().enumerate() {
                vec[c] = ratio(&rows[k][free].neg(), &rows[k][c]);
            }
            vec
        })
        .collect();
    Ok(LinearSolution::Underdetermined { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Fq;
    use crate::field::AmbientField;

    #[test]
    fn examples() {
        let k = AmbientField::new(Fq::prime(3).unwrap(), &["t"]).unwrap();
        let t = k.var(0);
        let one = k.one();
        let zero = k.zero();
        assert_eq!(linear_solve(&[vec![one.clone()]], std::slice::from_ref(&t)).unwrap(), LinearSolution::Unique(vec![t.clone()]));
        let m = vec![vec![t.clone(), one.clone()], vec![zero.clone(), t.clone()]];
        let sol = linear_solve(&m, &[one.clone(), one.clone()]).unwrap();
        assert_eq!(
            sol,
            LinearSolution::Unique(vec![k.parse("(t-1)/t^2").unwrap(), k.parse("1/t").unwrap()])
        );
        let m = vec![vec![t.clone()], vec![t.clone()]];
        assert_eq!(linear_solve(&m, &[one.clone(), zero.clone()]).unwrap(), LinearSolution::NoSolution);
    }

    #[test]
    fn underdetermined_kernel_is_annihilated() {
        let k = AmbientField::new(Fq::prime(2).unwrap(), &["s", "t"]).unwrap();
        let s = k.var(0);
        let t = k.var(1);
        let m = vec![vec![s.clone(), t.clone(), s.mul(&t)]];
        match linear_solve(&m, &[k.one()]).unwrap() {
            LinearSolution::Underdetermined { particular, kernel } => {
                assert_eq!(kernel.len(), 2);
                let dot = |x: &[RatFunc]| m[0].iter().zip(x).fold(k.zero(), |acc, (a, b)| acc.add(&a.mul(b)));
                assert!(dot(&particular).is_one());
                for v in &kernel {
                    assert!(dot(v).is_zero());
                }
            }
            other => panic!("{other:?}"),
        }
    }
}
