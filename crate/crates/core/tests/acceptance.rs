//! Acceptance suite. Each test prints one `PASS`/`FAIL` line and asserts on it.
//! Run with `cargo test -p plambda --test acceptance -- --nocapture` to see
//! the lines.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use common::*;
use plambda::closure::{is_separable, lambda_closure_of_subfield, ClosureEngine, Termination};
use plambda::field::{AmbientField, RatFunc};
use plambda::geometry::{
    hensel_newton, interior_residues, interior_scan, local_surjectivity_check, locus, NewtonSystem,
    SurjectivityParams, TruncSeries,
};
use plambda::lambda::{impdeg, lambda_eval};
use plambda::multiindex::MultiIndex;
use plambda::par::Exec;
use plambda::poly::{groebner_basis, Ideal, Limits, MPoly, MonomialOrder, PolyRing};
use plambda::subfield::{field_equal, field_leq, Membership, SubfieldPresentation};
use rand::seq::SliceRandom;
use rand::Rng;

fn verdict(n: u32, name: &str, ok: bool, detail: impl std::fmt::Display) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n:>2} [{tag}] {name}: {detail}");
    assert!(ok, "criterion {n} ({name}) failed: {detail}");
}

fn closure_of(k: &AmbientField, gens: &[RatFunc]) -> SubfieldPresentation {
    lambda_closure_of_subfield(k, gens).unwrap().0
}

fn subfield(k: &AmbientField, gens: &[&str]) -> SubfieldPresentation {
    SubfieldPresentation::new(k, els(k, gens)).unwrap()
}

#[test]
fn criterion_01_lambda_reconstruction() {
    let start = Instant::now();
    let mut rng = rng(0x1a3b);
    let two = ambient("GF(2)", &["s", "t"]);
    let three = ambient("GF(3)", &["t"]);

    // Ordered sub-tuples of (t, s, s+t, st) that the Jacobian oracle calls
    // p-independent.
    let pool = els(&two, &["t", "s", "s + t", "s*t"]);
    let mut tuples_two = Vec::new();
    for mask in 0u32..16 {
        let b: Vec<RatFunc> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| pool[i].clone()).collect();
        if jacobian_rank(&b, 2) == b.len() {
            tuples_two.push(b);
        }
    }
    let tuples_three = [Vec::new(), els(&three, &["t"])];

    let mut failures = Vec::new();
    for case in 0..500 {
        let (k, b) = if case % 2 == 0 {
            (&two, tuples_two.choose(&mut rng).unwrap().clone())
        } else {
            (&three, tuples_three.choose(&mut rng).unwrap().clone())
        };
        let p = k.p();
        let mut expected = BTreeMap::new();
        let mut a = k.zero();
        for idx in MultiIndex::all(b.len(), p) {
            let u = if rng.gen_bool(0.3) { k.zero() } else { random_ratfunc(&mut rng, k, 2, 2) };
            let mono = idx.entries().iter().zip(&b).fold(k.one(), |acc, (&e, x)| acc.mul(&x.pow(e as u64)));
            a = a.add(&mono.mul(&u.pow(p as u64)));
            expected.insert(idx, u);
        }
        let lambdas = match lambda_eval(k, &a, &b) {
            Ok(l) => l,
            Err(e) => {
                failures.push(format!("case {case}: {e}"));
                continue;
            }
        };
        let mut rebuilt = k.zero();
        for (idx, u) in &expected {
            let got = lambdas.get(idx).cloned().unwrap_or_else(|| k.zero());
            if &got != u {
                failures.push(format!("case {case}: coordinate {:?} is {got}, expected {u}", idx.entries()));
            }
            let mono = idx.entries().iter().zip(&b).fold(k.one(), |acc, (&e, x)| acc.mul(&x.pow(e as u64)));
            rebuilt = rebuilt.add(&mono.mul(&got.pow(p as u64)));
        }
        if rebuilt != a {
            failures.push(format!("case {case}: reconstruction differs"));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(30);
    verdict(1, "lambda reconstruction", ok, format!("500 cases, {} failures {:?}, {:.2?}", failures.len(), failures.first(), elapsed));
}

#[test]
fn criterion_02_mac_lane_equivalence() {
    let one = ambient("GF(2)", &["t"]);
    let two = ambient("GF(2)", &["s", "t"]);
    let corpus: Vec<(&AmbientField, Vec<&str>)> = vec![
        (&one, vec!["t"]),
        (&one, vec!["t^2"]),
        (&one, vec!["t^3"]),
        (&one, vec!["t^2 + t"]),
        (&one, vec!["t^4"]),
        (&one, vec!["t^6"]),
        (&one, vec!["t^3 + t"]),
        (&one, vec!["1/(t^2 + t)"]),
        (&one, vec!["(t^2 + 1)/t"]),
        (&one, vec!["t^4 + t^2"]),
        (&one, vec!["t^5"]),
        (&one, vec!["t^2", "t^3"]),
        (&two, vec!["s", "t"]),
        (&two, vec!["s^2", "t"]),
        (&two, vec!["s^2", "t^2"]),
        (&two, vec!["s + t", "s*t"]),
        (&two, vec!["s^2 + t", "t^2"]),
        (&two, vec!["s*t"]),
        (&two, vec!["s^2"]),
        (&two, vec!["s^2*t"]),
        (&two, vec!["s + t^2"]),
        (&two, vec!["s^2 + t^2"]),
        (&two, vec!["s", "t^2"]),
        (&two, vec!["s^2 + s", "t^2 + t"]),
        (&two, vec!["s*t^2", "s^2*t"]),
    ];
    let mut disagreements = Vec::new();
    let mut separable_count = 0;
    for (k, gens) in &corpus {
        let c = subfield(k, gens);
        let sep = is_separable(&c, &SubfieldPresentation::whole(k)).unwrap();
        let closed = field_equal(&closure_of(k, c.gens()), &c).unwrap();
        separable_count += sep as usize;
        if sep != closed {
            disagreements.push(format!("{gens:?}: separable={sep}, closure equal={closed}"));
        }
    }
    verdict(
        2,
        "Mac Lane equivalence",
        disagreements.is_empty(),
        format!("{} subfields ({separable_count} separable), {} disagreements {:?}", corpus.len(), disagreements.len(), disagreements),
    );
}

#[test]
fn criterion_03_perfect_hull_ladder() {
    let k = ambient("GF(2)", &["t"]);
    let whole = SubfieldPresentation::whole(&k);
    let mut details = Vec::new();
    let mut ok = true;
    for e in 1..=4u32 {
        let start = Instant::now();
        let gen = el(&k, &format!("t^{}", 1u32 << e));
        let (field, trace) = lambda_closure_of_subfield(&k, &[gen]).unwrap();
        let elapsed = start.elapsed();
        let equal = field_equal(&field, &whole).unwrap();
        let steps_ok = trace.termination == Termination::Fixpoint(e as usize);
        ok &= equal && steps_ok && elapsed < Duration::from_secs(5);
        details.push(format!("k={e}: {:?} equal={equal} {:.2?}", trace.termination, elapsed));
    }
    verdict(3, "perfect-hull ladder", ok, details.join("; "));
}

#[test]
fn criterion_04_idempotence_and_monotonicity() {
    let one = ambient("GF(2)", &["t"]);
    let two = ambient("GF(2)", &["s", "t"]);
    let pairs: Vec<(&AmbientField, Vec<&str>, Vec<&str>)> = vec![
        (&one, vec!["t^4"], vec!["t^4", "t^6"]),
        (&one, vec!["t^8"], vec!["t^8", "t^2 + t"]),
        (&one, vec!["t^6"], vec!["t^6", "t^4"]),
        (&one, vec!["t^2"], vec!["t^2", "t^3"]),
        (&one, vec!["t^4 + t^2"], vec!["t^4 + t^2", "t^4"]),
        (&two, vec!["s^2"], vec!["s^2", "t^2"]),
        (&two, vec!["s^2*t^2"], vec!["s^2*t^2", "t^4"]),
        (&two, vec!["s^2", "t^2"], vec!["s^2", "t"]),
        (&two, vec!["s^2 + t^2"], vec!["s^2 + t^2", "s*t"]),
        (&two, vec!["s^4"], vec!["s^4", "t^2 + s"]),
    ];
    let mut failures = Vec::new();
    for (k, small, large) in &pairs {
        let mut closures = Vec::new();
        for gens in [small, large] {
            let once = closure_of(k, &els(k, gens));
            let twice = closure_of(k, once.gens());
            if !field_equal(&once, &twice).unwrap() {
                failures.push(format!("not idempotent on {gens:?}"));
            }
            closures.push(once);
        }
        if !field_leq(&closures[0], &closures[1]).unwrap() {
            failures.push(format!("not monotone on {small:?} <= {large:?}"));
        }
    }
    verdict(4, "idempotence and monotonicity", failures.is_empty(), format!("{} generator sets, failures {:?}", pairs.len() * 2, failures));
}

#[test]
fn criterion_05_truncation() {
    let one = ambient("GF(2)", &["t"]);
    let two = ambient("GF(2)", &["s", "t"]);
    let three = ambient("GF(3)", &["t"]);
    let cases: Vec<(&AmbientField, Vec<&str>, Vec<&str>)> = vec![
        (&one, vec!["t^2"], vec!["t"]),
        (&one, vec!["t^4"], vec!["t"]),
        (&one, vec!["t^3"], vec!["t"]),
        (&two, vec!["s^2"], vec!["s"]),
        (&two, vec!["s^2*t^2"], vec!["s"]),
        (&two, vec!["s^2", "t^2"], vec!["s", "t"]),
        (&two, vec!["s^2 + t"], vec!["s"]),
        (&two, vec!["s^4 + t^2"], vec!["s", "t"]),
        (&three, vec!["t^3"], vec!["t"]),
        (&three, vec!["t^9"], vec!["t"]),
    ];
    let mut failures = Vec::new();
    let mut stages = Vec::new();
    for (k, a, b) in &cases {
        let (a, b) = (els(k, a), els(k, b));
        let engine = ClosureEngine::over_prime_field(k);
        let trunc = engine.lambda_fbc(&a, &b).unwrap();
        stages.push(trunc.stage);
        let projected: Vec<RatFunc> = trunc.sigma.iter().map(|&i| trunc.tuple[i].clone()).collect();
        if projected != a {
            failures.push(format!("{a:?}: sigma projection {projected:?}"));
        }
        let lower = SubfieldPresentation::new(k, trunc.tuple.clone()).unwrap();
        let upper = lower.adjoin(&b);
        if !is_separable(&lower, &upper).unwrap() {
            failures.push(format!("{a:?}/{b:?}: b not separable over the truncation"));
        }
    }
    verdict(5, "truncation", failures.is_empty(), format!("{} cases, stages {stages:?}, failures {failures:?}", cases.len()));
}

#[test]
fn criterion_06_hensel_artin_schreier() {
    let k = ambient("GF(2)", &["t", "y"]);
    let ring = PolyRing::new(k.field().clone(), vec!["t".into(), "y".into()]);
    let f = el(&k, "y^2 + y + t").num().map_ring(&ring, &[0, 1]);
    let sys = NewtonSystem::new(&ring, vec![f], vec![1]).unwrap();
    let fq = k.field();
    let t = TruncSeries::monomial(fq, 33, 1, 1);
    let out = hensel_newton(&sys, &[t, TruncSeries::zero(fq, 33)], 33).unwrap();

    let expected: Vec<u32> = (0..33).map(|i: u32| (i > 0 && i.is_power_of_two()) as u32).collect();
    let exact = out.point[1].coeffs() == expected.as_slice();
    let v = &out.residual_valuations;
    let doubling = v.windows(2).all(|w| w[1] >= (2 * w[0]).min(33));
    let ok = exact && out.steps <= 6 && doubling;
    verdict(6, "Hensel lift of y^2 + y + t", ok, format!("y = {}, {} steps, valuations {v:?}", out.point[1], out.steps));
}

#[test]
fn criterion_07_locus_goldens() {
    let k = ambient("GF(2)", &["t"]);
    let base = SubfieldPresentation::base(&k);
    let render = |srcs: &[&str]| -> Vec<String> {
        locus(&els(&k, srcs), &base).unwrap().basis.iter().map(|g| g.to_string()).collect()
    };
    let first = render(&["t", "t^2"]);
    let second = render(&["1/(t + 1)", "t"]);
    let ok = first == ["x1^2 + x2"] && second == ["x1*x2 + x1 + 1"];
    verdict(7, "locus goldens", ok, format!("{first:?} and {second:?}"));
}

#[test]
fn criterion_08_local_surjectivity() {
    let k = ambient("GF(2)", &["s"]);
    let base = SubfieldPresentation::base(&k);
    let report = local_surjectivity_check(&els(&k, &["s^2 + s"]), &els(&k, &["s"]), &base, &SurjectivityParams::default()).unwrap();
    let non_unit = report.failures.iter().filter(|f| f.contains("Jacobian")).count();
    let ok = report.samples == 100 && report.lifted == 100 && non_unit == 0 && report.precision == 32;
    verdict(8, "local surjectivity", ok, format!("{}/{} lifted at precision {}, {non_unit} non-unit Jacobians", report.lifted, report.samples, report.precision));
}

/// Coefficients of `y^2 + T*y^4 mod T^n` over `GF(2)`, as a bit mask.
fn image_bits(y: u64, n: usize) -> u64 {
    let spread = |x: u64, step: usize| (0..64).filter(|i| x >> i & 1 == 1).fold(0u64, |acc, i| acc | 1u64.checked_shl((i * step) as u32).unwrap_or(0));
    let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    (spread(y, 2) ^ (spread(y, 4) << 1)) & mask
}

#[test]
fn criterion_09_empty_interior() {
    let (n, ybound) = (12usize, 6usize);
    let lib: BTreeSet<u64> = interior_residues(2, n, ybound, Exec::default())
        .unwrap()
        .into_iter()
        .map(|c| c.iter().enumerate().fold(0u64, |acc, (i, &d)| acc | (d as u64) << i))
        .collect();
    // Independent enumeration, walking the inputs from the top down.
    let oracle: BTreeSet<u64> = (0..1u64 << ybound).rev().map(|y| image_bits(y, n)).collect();

    let mut full_levels = Vec::new();
    for m in 0..=8usize {
        let coset = 1usize << (n - m);
        let mut by_prefix: HashMap<u64, usize> = HashMap::new();
        for r in &oracle {
            *by_prefix.entry(r & ((1u64 << m) - 1)).or_default() += 1;
        }
        if by_prefix.values().any(|&c| c == coset) {
            full_levels.push(m);
        }
    }
    let report = interior_scan(2, n, ybound, Exec::default()).unwrap();
    let ok = lib == oracle && full_levels.is_empty() && !report.full_coset_found && report.residues == oracle.len();
    verdict(9, "empty interior", ok, format!("{} residues, sets equal={}, full cosets at m={full_levels:?}", lib.len(), lib == oracle));
}

#[test]
fn criterion_10_groebner_determinism() {
    let mut rng = rng(0x6b);
    let mut mismatches = 0;
    for case in 0..50 {
        let (field, vars): (&str, &[&str]) = if case % 5 == 4 { ("GF(3)", &["x", "y", "z"]) } else { ("GF(2)", &["x", "y", "z"]) };
        let k = ambient(field, vars);
        let count = rng.gen_range(2..=4);
        let gens: Vec<MPoly> = (0..count).map(|_| random_nonzero_poly(&mut rng, &k, 3, 2)).collect();
        let mut reference = None;
        let mut order: Vec<usize> = (0..count).collect();
        for perm in 0..5 {
            match perm {
                0 => {}
                1 => order.reverse(),
                _ => order.shuffle(&mut rng),
            }
            let permuted = order.iter().map(|&i| gens[i].clone()).collect();
            let ideal = Ideal::new(k.ring(), permuted).unwrap();
            let basis = groebner_basis(&ideal, &MonomialOrder::Grevlex, &Limits::default()).unwrap();
            match &reference {
                None => reference = Some(basis),
                Some(r) if *r != basis => mismatches += 1,
                Some(_) => {}
            }
        }
    }
    verdict(10, "Gröbner determinism", mismatches == 0, format!("50 ideals x 5 orders, {mismatches} mismatches"));
}

/// Monomials of total degree at most 3 in the generators, each multiplied by
/// the common denominator so that it is a polynomial.
fn cleared_monomials(gens: &[RatFunc]) -> Vec<MPoly> {
    let mut out = Vec::new();
    let mut push = |exps: &[u32]| {
        let mut m = MPoly::one(gens[0].ring());
        for (g, &e) in gens.iter().zip(exps) {
            m = m.mul(&g.num().pow(e as u64)).mul(&g.den().pow(3 - e as u64));
        }
        out.push(m);
    };
    match gens.len() {
        1 => (0..=3).for_each(|i| push(&[i])),
        _ => {
            for i in 0..=3 {
                for j in 0..=3 - i {
                    push(&[i, j]);
                }
            }
        }
    }
    out
}

/// Rank over `GF(2)` of a family of polynomials.
fn poly_rank(polys: &[MPoly]) -> usize {
    let mut index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for p in polys {
        for (e, _) in p.terms() {
            let next = index.len();
            index.entry(e.to_vec()).or_insert(next);
        }
    }
    let words = index.len().div_ceil(64).max(1);
    let rows = polys
        .iter()
        .map(|p| {
            let mut row = vec![0u64; words];
            for (e, _) in p.terms() {
                let i = index[&e.to_vec()];
                row[i / 64] |= 1 << (i % 64);
            }
            row
        })
        .collect();
    gf2_rank(rows)
}

/// `x = P(g)/Q(g)` with `deg P, deg Q <= 3` and `Q(g) != 0` iff the spans of
/// the `P` columns and of the `x*Q` columns meet nontrivially.
fn bounded_witness_exists(x: &RatFunc, gens: &[RatFunc]) -> bool {
    if x.is_zero() {
        return true;
    }
    let monos = cleared_monomials(gens);
    let p_cols: Vec<MPoly> = monos.iter().map(|m| m.mul(x.den())).collect();
    let q_cols: Vec<MPoly> = monos.iter().map(|m| m.mul(x.num())).collect();
    let both: Vec<MPoly> = p_cols.iter().chain(&q_cols).cloned().collect();
    poly_rank(&p_cols) + poly_rank(&q_cols) > poly_rank(&both)
}

#[test]
fn criterion_11_membership_oracle() {
    let one = ambient("GF(2)", &["t"]);
    let two = ambient("GF(2)", &["s", "t"]);
    let gen_sets: Vec<(&AmbientField, Vec<&str>)> = vec![
        (&one, vec!["t^2"]),
        (&one, vec!["t^3"]),
        (&one, vec!["t^2 + t"]),
        (&one, vec!["(t^2 + 1)/t"]),
        (&two, vec!["s^2", "t"]),
        (&two, vec!["s + t", "s*t"]),
        (&two, vec!["s^2 + t"]),
        (&two, vec!["s*t", "t^2"]),
        (&two, vec!["s^2", "t^2"]),
        (&two, vec!["s/t"]),
    ];
    let mut rng = rng(0x11);
    let mut disagreements = Vec::new();
    let mut members = 0;
    for case in 0..50 {
        let (k, srcs) = &gen_sets[case % gen_sets.len()];
        let gens = els(k, srcs);
        let x = if case % 2 == 0 {
            // A quotient of two random polynomials of degree <= 2 in the generators.
            let poly_in_gens = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut acc = k.zero();
                for i in 0..=2u64 {
                    for j in 0..=(if gens.len() == 2 { 2 - i } else { 0 }) {
                        if rng.gen_bool(0.5) {
                            let mut m = gens[0].pow(i);
                            if gens.len() == 2 {
                                m = m.mul(&gens[1].pow(j));
                            }
                            acc = acc.add(&m);
                        }
                    }
                }
                acc
            };
            let num = poly_in_gens(&mut rng);
            let mut den = poly_in_gens(&mut rng);
            while den.is_zero() {
                den = poly_in_gens(&mut rng);
            }
            num.div(&den).unwrap()
        } else {
            random_ratfunc(&mut rng, k, 2, 2)
        };
        let d = SubfieldPresentation::new(k, gens.clone()).unwrap();
        let answer = d.member(&x).unwrap();
        if let Membership::Yes(w) = &answer {
            if w.eval(&gens, k).unwrap() != x {
                disagreements.push(format!("case {case}: witness {w} does not evaluate to {x}"));
            }
        }
        let oracle = bounded_witness_exists(&x, &gens);
        members += oracle as usize;
        if oracle != answer.is_yes() {
            disagreements.push(format!("case {case}: {x} in GF(2)({srcs:?}): library {answer:?}, oracle {oracle}"));
        }
    }
    verdict(11, "membership oracle", disagreements.is_empty(), format!("50 cases ({members} members), disagreements {disagreements:?}"));
}

#[test]
fn criterion_12_imperfection_degree() {
    let mut failures = Vec::new();
    let names = ["t1", "t2", "t3"];
    for field in ["GF(2)", "GF(3)", "GF(2^2)"] {
        for n in 1..=3 {
            let k = ambient(field, &names[..n]);
            let whole = SubfieldPresentation::whole(&k);
            let listed = SubfieldPresentation::new(&k, k.canonical_p_basis()).unwrap();
            for d in [&whole, &listed] {
                let got = impdeg(d).unwrap();
                if got != n {
                    failures.push(format!("{field} n={n}: {got}"));
                }
            }
        }
    }
    let k = ambient("GF(2)", &["t"]);
    let square = impdeg(&subfield(&k, &["t^2"])).unwrap();
    if square != 1 {
        failures.push(format!("GF(2)(t^2): {square}"));
    }

    let two = ambient("GF(2)", &["s", "t"]);
    let three = ambient("GF(3)", &["s", "t"]);
    let sets: Vec<(&AmbientField, Vec<&str>)> = vec![
        (&two, vec!["s^2", "t", "s*t", "s + t"]),
        (&two, vec!["s^2", "t^2", "s^2*t^2"]),
        (&two, vec!["t^2", "t^3"]),
        (&two, vec!["s^2 + t", "t^2", "s^4"]),
        (&three, vec!["s^3", "t", "s*t"]),
    ];
    for (k, srcs) in &sets {
        let gens = els(k, srcs);
        let mut values = BTreeSet::new();
        let mut idx: Vec<usize> = (0..gens.len()).collect();
        permute_all(&mut idx, 0, &mut |order| {
            let d = SubfieldPresentation::new(k, order.iter().map(|&i| gens[i].clone()).collect()).unwrap();
            values.insert(impdeg(&d).unwrap());
        });
        if values.len() != 1 {
            failures.push(format!("{srcs:?}: values {values:?}"));
        }
    }
    verdict(12, "imperfection degree", failures.is_empty(), format!("failures {failures:?}"));
}

fn permute_all(idx: &mut Vec<usize>, from: usize, f: &mut impl FnMut(&[usize])) {
    if from == idx.len() {
        f(idx);
        return;
    }
    for i in from..idx.len() {
        idx.swap(from, i);
        permute_all(idx, from + 1, f);
        idx.swap(from, i);
    }
}
