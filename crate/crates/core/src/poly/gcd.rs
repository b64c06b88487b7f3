//! Multivariate gcd by recursive primitive pseudo-remainder sequences.

use super::MPoly;

/// Monic (grevlex) greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    gcd_rec(a, b).monic()
}

pub fn gcd_many<'a>(polys: impl IntoIterator<Item = &'a MPoly>) -> Option<MPoly> {
    let mut acc: Option<MPoly> = None;
    for p in polys {
        acc = Some(match acc {
            None => p.monic(),
            Some(a) => gcd(&a, p),
        });
        if acc.as_ref().is_some_and(|a| a.is_one()) {
            break;
        }
    }
    acc
}

/// Gcd of the coefficients of `a` viewed as a polynomial in `var`.
pub fn content_in(a: &MPoly, var: usize) -> MPoly {
    let mut acc = MPoly::zero(a.ring());
    for c in a.coeffs_in(var) {
        if c.is_zero() {
            continue;
        }
        acc = gcd_rec(&acc, &c);
        if acc.is_constant() {
            return MPoly::one(a.ring());
        }
    }
    acc.monic()
}

fn gcd_rec(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(a.ring());
    }
    if a == b {
        return a.clone();
    }
    let n = a.ring().nvars();
    let used_a: Vec<bool> = (0..n).map(|v| a.uses_var(v)).collect();
    let used_b: Vec<bool> = (0..n).map(|v| b.uses_var(v)).collect();
    let v = (0..n).rev().find(|&v| used_a[v] || used_b[v]).expect("non-constant");
    if !used_a[v] {
        return gcd_rec(a, &content_in(b, v));
    }
    if !used_b[v] {
        return gcd_rec(&content_in(a, v), b);
    }
    if (0..n).filter(|&w| used_a[w] || used_b[w]).count() == 1 {
        return euclid(a, b, v);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_rec(&ca, &cb);
    let mut f = a.div_exact(&ca).expect("content divides");
    let mut g = b.div_exact(&cb).expect("content divides");
    if f.degree_in(v) < g.degree_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            return c;
        }
        let cr = content_in(&r, v);
        f = g;
        g = r.div_exact(&cr).expect("content divides");
    }
    c.mul(&g)
}

/// Euclid's algorithm for polynomials in the single variable `v`.
fn euclid(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let (mut f, mut g) = (a.monic(), b.monic());
    if f.degree_in(v) < g.degree_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() {
        let r = rem_univariate(&f, &g, v);
        f = g;
        g = r.monic();
    }
    f
}

fn rem_univariate(f: &MPoly, g: &MPoly, v: usize) -> MPoly {
    let field = f.field().clone();
    let dg = g.degree_in(v);
    let lg = g.terms()[0].1;
    let inv = field.inv(lg).unwrap();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let (e, c) = r.terms()[0].clone();
        let mut shift = e.clone();
        shift[v] -= dg;
        r = r.sub(&g.mul_term(&shift, field.mul(c, inv)));
    }
    r
}

/// Pseudo-remainder of `f` by `g` in the variable `v`.
fn prem(f: &MPoly, g: &MPoly, v: usize) -> MPoly {
    let dg = g.degree_in(v);
    let gc = g.coeffs_in(v);
    let lg = gc[dg as usize].clone();
    let mut r = f.clone();
    let ring = f.ring().clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lr = r.coeffs_in(v).pop().unwrap();
        let mut shift = super::zero_exps(ring.nvars());
        shift[v] = dr - dg;
        r = r.mul(&lg).sub(&g.mul(&lr).mul_term(&shift, 1));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn univariate_and_multivariate() {
        let r = ring(2, &["s", "t"]);
        let s = MPoly::var(&r, 0);
        let t = MPoly::var(&r, 1);
        let one = MPoly::one(&r);
        let a = s.add(&t);
        let b = s.mul(&t).add(&one);
        let c = t.pow(2).add(&s);
        assert_eq!(gcd(&a.mul(&b), &a.mul(&c)), a);
        assert_eq!(gcd(&a.mul(&b).mul(&b), &b.mul(&c).mul(&b)), b.mul(&b));
        assert!(gcd(&b, &c).is_one());
        assert_eq!(gcd(&t.add(&one).pow(2), &t.pow(2).add(&one)), t.pow(2).add(&one));
        assert_eq!(gcd(&MPoly::zero(&r), &a.scale(1)), a);
        assert_eq!(content_in(&s.mul(&t).add(&s), 1), s);
    }
}
