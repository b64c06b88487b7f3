use super::TruncSeries;
use crate::error::{Error, Result};
use crate::poly::{MPoly, RingRef};

/// Polynomials `f_1..f_r` over `GF(q)` with a designated block of `r`
/// unknowns; every other variable is a parameter.
#[derive(Clone, Debug)]
pub struct NewtonSystem {
    ring: RingRef,
    polys: Vec<MPoly>,
    unknowns: Vec<usize>,
    /// `jacobian[i][j] = ∂f_i/∂(unknown j)`, formal partials.
    jacobian: Vec<Vec<MPoly>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonOutcome {
    /// The full point with the unknowns replaced by the lifted values.
    pub point: Vec<TruncSeries>,
    pub steps: usize,
    /// Minimum residual valuation before each step and after the last.
    pub residual_valuations: Vec<usize>,
    /// Valuation of the Jacobian determinant at the starting point.
    pub jacobian_valuation: usize,
}

impl NewtonOutcome {
    pub fn unknown_values(&self, sys: &NewtonSystem) -> Vec<TruncSeries> {
        sys.unknowns.iter().map(|&v| self.point[v].clone()).collect()
    }
}

impl NewtonSystem {
    pub fn new(ring: &RingRef, polys: Vec<MPoly>, unknowns: Vec<usize>) -> Result<Self> {
        if polys.len() != unknowns.len() {
            return Err(Error::invalid(format!(
                "{} equations for {} unknowns",
                polys.len(),
                unknowns.len()
            )));
        }
        if unknowns.iter().any(|&u| u >= ring.nvars()) {
            return Err(Error::invalid("unknown outside the ring"));
        }
        let jacobian = polys.iter().map(|f| unknowns.iter().map(|&u| f.derivative(u)).collect()).collect();
        Ok(NewtonSystem { ring: ring.clone(), polys, unknowns, jacobian })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn polys(&self) -> &[MPoly] {
        &self.polys
    }

    pub fn unknowns(&self) -> &[usize] {
        &self.unknowns
    }

    pub fn jacobian(&self) -> &[Vec<MPoly>] {
        &self.jacobian
    }

    fn residual(&self, point: &[TruncSeries], one: &TruncSeries) -> Vec<TruncSeries> {
        self.polys.iter().map(|f| f.eval(point, one)).collect()
    }

    fn jacobian_at(&self, point: &[TruncSeries], one: &TruncSeries) -> Vec<Vec<TruncSeries>> {
        self.jacobian.iter().map(|row| row.iter().map(|d| d.eval(point, one)).collect()).collect()
    }

    pub fn jacobian_valuation(&self, point: &[TruncSeries]) -> usize {
        let Some(first) = point.first() else { return 0 };
        let one = TruncSeries::one(first.field(), first.precision());
        determinant(&self.jacobian_at(point, &one), &one).valuation()
    }
}

fn determinant(m: &[Vec<TruncSeries>], one: &TruncSeries) -> TruncSeries {
    match m.len() {
        0 => one.clone(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = one.scale(0);
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<TruncSeries>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = m[0][col].mul(&determinant(&minor, one));
                acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Solves `m * x = v` over truncated series by elimination with unit pivots.
fn solve_unit(mut m: Vec<Vec<TruncSeries>>, mut v: Vec<TruncSeries>) -> Result<Vec<TruncSeries>> {
    let n = v.len();
    for col in 0..n {
        let pr = (col..n).find(|&r| m[r][col].is_unit()).ok_or(Error::NonUnitJacobian)?;
        m.swap(col, pr);
        v.swap(col, pr);
        let inv = m[col][col].inv()?;
        for x in &mut m[col][col..] {
            *x = x.mul(&inv);
        }
        v[col] = v[col].mul(&inv);
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            let pivot = m[col].clone();
            for (x, y) in m[r][col..].iter_mut().zip(&pivot[col..]) {
                *x = x.sub(&factor.mul(y));
            }
            let sub = factor.mul(&v[col]);
            v[r] = v[r].sub(&sub);
        }
    }
    Ok(v)
}

/// Newton iteration on the unknowns of `point` until every residual vanishes
/// modulo `T^precision`. Each step must raise the residual valuation.
pub fn hensel_newton(sys: &NewtonSystem, point: &[TruncSeries], precision: usize) -> Result<NewtonOutcome> {
    if point.len() != sys.ring.nvars() {
        return Err(Error::invalid("point does not match the system's variables"));
    }
    let Some(first) = point.first() else {
        return Ok(NewtonOutcome { point: Vec::new(), steps: 0, residual_valuations: Vec::new(), jacobian_valuation: 0 });
    };
    let field = first.field().clone();
    let one = TruncSeries::one(&field, precision);
    let mut point: Vec<TruncSeries> = point.iter().map(|x| widen(x, precision)).collect();
    let jacobian_valuation = sys.jacobian_valuation(&point);
    let mut valuations = Vec::new();
    let mut steps = 0;
    loop {
        let r = sys.residual(&point, &one);
        let v = r.iter().map(|x| x.valuation()).min().unwrap_or(precision);
        if let Some(&prev) = valuations.last() {
            if v <= prev && v < precision {
                valuations.push(v);
                return Err(Error::NoConvergence { valuation: v });
            }
        }
        valuations.push(v);
        if v >= precision {
            return Ok(NewtonOutcome { point, steps, residual_valuations: valuations, jacobian_valuation });
        }
        let delta = solve_unit(sys.jacobian_at(&point, &one), r)?;
        for (&u, d) in sys.unknowns.iter().zip(&delta) {
            point[u] = point[u].sub(d);
        }
        steps += 1;
    }
}

/// Pads or truncates to exactly `n` coefficients.
fn widen(x: &TruncSeries, n: usize) -> TruncSeries {
    TruncSeries::from_coeffs(x.field(), n, x.coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Fq;
    use crate::poly::PolyRing;

    fn parse_system(p: u32, vars: &[&str], srcs: &[&str], unknowns: Vec<usize>) -> NewtonSystem {
        let f = Fq::prime(p).unwrap();
        let ring = PolyRing::new(f.clone(), vars.iter().map(|s| s.to_string()).collect());
        let k = crate::field::AmbientField::new(f, vars).unwrap();
        let polys = srcs.iter().map(|s| k.parse(s).unwrap().num().map_ring(&ring, &(0..vars.len()).collect::<Vec<_>>())).collect();
        NewtonSystem::new(&ring, polys, unknowns).unwrap()
    }

    #[test]
    fn artin_schreier_lift() {
        let sys = parse_system(2, &["x", "y"], &["y^2 + y + x"], vec![1]);
        let f = Fq::prime(2).unwrap();
        let t = TruncSeries::monomial(&f, 33, 1, 1);
        let out = hensel_newton(&sys, &[t, TruncSeries::zero(&f, 33)], 33).unwrap();
        assert_eq!(out.point[1].to_string(), "t + t^2 + t^4 + t^8 + t^16 + t^32");
        assert_eq!(out.steps, 6);
        assert_eq!(out.residual_valuations, vec![1, 2, 4, 8, 16, 32, 33]);
        assert_eq!(out.jacobian_valuation, 0);
        let again = hensel_newton(&sys, &out.point, 33).unwrap();
        assert_eq!((again.steps, &again.point), (0, &out.point));
    }

    #[test]
    fn linear_and_degenerate_systems() {
        let f = Fq::prime(2).unwrap();
        let sys = parse_system(2, &["x", "y"], &["y - x"], vec![1]);
        let x0 = TruncSeries::from_coeffs(&f, 8, &[1, 0, 1, 1]);
        let out = hensel_newton(&sys, &[x0.clone(), TruncSeries::zero(&f, 8)], 8).unwrap();
        assert_eq!(out.point[1], x0);
        let sys = parse_system(2, &["x", "y"], &["y^2 + x"], vec![1]);
        let t = TruncSeries::monomial(&f, 8, 1, 1);
        assert_eq!(hensel_newton(&sys, &[t, TruncSeries::zero(&f, 8)], 8), Err(Error::NonUnitJacobian));
    }

    #[test]
    fn two_unknowns() {
        // y1 = x + y2^2, y2 = x*y1 + 1 around (0, 1) at x = 0
        let f = Fq::prime(3).unwrap();
        let sys = parse_system(3, &["x", "y1", "y2"], &["y1 - x - y2^2", "y2 - x*y1 - 1"], vec![1, 2]);
        let t = TruncSeries::monomial(&f, 20, 1, 1);
        let start = [t, TruncSeries::one(&f, 20), TruncSeries::one(&f, 20)];
        let out = hensel_newton(&sys, &start, 20).unwrap();
        let one = TruncSeries::one(&f, 20);
        for p in sys.polys() {
            assert!(p.eval(&out.point, &one).is_zero());
        }
    }
}
