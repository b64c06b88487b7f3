use serde_json::{json, Value};

use plambda::closure::{is_separable, is_separated, ClosureTrace};
use plambda::ff::Fq;
use plambda::field::{AmbientField, RatFunc};
use plambda::geometry::{
    embed, hensel_newton, interior_scan, local_surjectivity_check, locus, NewtonSystem, SurjectivityMode,
    SurjectivityParams,
};
use plambda::lambda::{impdeg_rel, lambda_eval, p_basis, p_ind_prefix, p_independent, relative_p_basis};
use plambda::parse::parse_expr;
use plambda::subfield::{Membership, MinimalPolynomial, NonMembership, SubfieldPresentation};
use plambda::{Error, Result};

use crate::args::{Command, ModeArg, PairArgs, SessionArgs};
use crate::session::{split_list, Session};

/// Machine-readable result plus a short human rendering.
pub struct Outcome {
    pub result: Value,
    pub summary: String,
}

fn strings(xs: &[RatFunc]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn list(xs: &[RatFunc]) -> String {
    format!("({})", strings(xs).join(", "))
}

pub fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Lambda { .. } => "lambda",
        Command::Pind { .. } => "pind",
        Command::Closure { .. } => "closure",
        Command::Fbc { .. } => "fbc",
        Command::Separable(_) => "separable",
        Command::Separated(_) => "separated",
        Command::Impdeg { .. } => "impdeg",
        Command::Member { .. } => "member",
        Command::Locus { .. } => "locus",
        Command::Hensel { .. } => "hensel",
        Command::Surjectivity { .. } => "surjectivity",
        Command::InteriorScan { .. } => "interior-scan",
        Command::Batch { .. } => "batch",
    }
}

fn trace_value(trace: &ClosureTrace) -> Value {
    serde_json::to_value(trace.report()).expect("trace reports serialize")
}

pub fn run(cmd: &Command, args: &SessionArgs) -> Result<Outcome> {
    if let Command::InteriorScan { p, prec, ybound } = cmd {
        let exec = if args.sequential { plambda::par::Exec::Sequential } else { plambda::par::Exec::Parallel };
        let r = interior_scan(*p, *prec, *ybound, exec)?;
        let summary = format!(
            "{} residues from {} images; full coset found: {}",
            r.residues, r.images, r.full_coset_found
        );
        return Ok(Outcome { result: serde_json::to_value(&r).unwrap(), summary });
    }
    let s = Session::new(args)?;
    match cmd {
        Command::Lambda { a, b } => {
            let a = s.element(a)?;
            let b = s.tuple(b)?;
            let family = lambda_eval(&s.k, &a, &b)?;
            let rows: Vec<Value> =
                family.iter().map(|(i, v)| json!({"index": i, "value": v.to_string()})).collect();
            let summary = family.iter().map(|(i, v)| format!("{i}: {v}")).collect::<Vec<_>>().join("\n");
            Ok(Outcome { result: json!({ "lambdas": rows }), summary })
        }
        Command::Pind { b, base } => {
            let c = s.subfield(base)?;
            let b = s.tuple(b)?;
            let prefix = p_ind_prefix(&b, &c)?;
            let independent = p_independent(&b, &c)?;
            let summary = format!("prefix {}; independent: {independent}", list(&prefix));
            Ok(Outcome { result: json!({"prefix": strings(&prefix), "independent": independent}), summary })
        }
        Command::Closure { gens, base } => {
            let engine = s.engine(base)?;
            let gens = s.tuple(gens)?;
            let trace = engine.local_closure(&gens)?;
            let field = engine.closure_field(&trace)?;
            let steps = match trace.termination {
                plambda::closure::Termination::Fixpoint(n) | plambda::closure::Termination::TargetSeparable(n) => n,
            };
            let basis: Vec<RatFunc> = engine.p_basis().iter().chain(&trace.last().a).cloned().collect();
            let mut result = json!({
                "gens": strings(field.gens()),
                "steps": steps,
                "p_basis": strings(&basis),
            });
            if args.trace {
                result["trace"] = trace_value(&trace);
            }
            let summary = format!("closure generated by {} after {steps} steps", list(field.gens()));
            Ok(Outcome { result, summary })
        }
        Command::Fbc { a, b, base, all_orderings } => {
            let engine = s.engine(base)?;
            let a = s.tuple(a)?;
            let b = s.tuple(b)?;
            let t = engine.lambda_fbc(&a, &b)?;
            let mut result = json!({
                "tuple": strings(&t.tuple),
                "length": t.tuple.len(),
                "sigma": t.sigma,
                "stage": t.stage,
            });
            if *all_orderings {
                let per: Vec<Value> = engine
                    .lambda_fbc_all_orderings(&a, &b)?
                    .into_iter()
                    .map(|(perm, n)| json!({"ordering": perm, "stage": n}))
                    .collect();
                let max = per.iter().filter_map(|v| v["stage"].as_u64()).max().unwrap_or(0);
                result["orderings"] = Value::Array(per);
                result["max_stage"] = json!(max);
            }
            if args.trace {
                result["trace"] = trace_value(&t.trace);
            }
            let summary = format!("stage {}: {} with sigma {:?}", t.stage, list(&t.tuple), t.sigma);
            Ok(Outcome { result, summary })
        }
        Command::Separable(pair) | Command::Separated(pair) => {
            let (d, e) = pair_fields(&s, pair)?;
            let separated = matches!(cmd, Command::Separated(_));
            let verdict = if separated { is_separated(&d, &e)? } else { is_separable(&d, &e)? };
            let key = if separated { "separated" } else { "separable" };
            Ok(Outcome { result: json!({ key: verdict }), summary: format!("{key}: {verdict}") })
        }
        Command::Impdeg { gens, base } => {
            let d = if gens.trim().is_empty() { SubfieldPresentation::whole(&s.k) } else { s.subfield(gens)? };
            let (degree, basis) = match base {
                None => {
                    let b = p_basis(&d)?;
                    (b.len(), b)
                }
                Some(src) => {
                    let c = s.subfield(src)?;
                    (impdeg_rel(&d, &c)?, relative_p_basis(&d, &c)?)
                }
            };
            let summary = format!("{degree} (p-basis {})", list(&basis));
            Ok(Outcome { result: json!({"impdeg": degree, "p_basis": strings(&basis)}), summary })
        }
        Command::Member { x, gens, minpoly } => {
            let d = s.subfield(gens)?;
            let x = s.element(x)?;
            let (mut result, mut summary) = match d.member(&x)? {
                Membership::Yes(w) => (json!({"member": true, "witness": w.render()}), format!("member: {w}")),
                Membership::No(reason) => {
                    let text = match &reason {
                        NonMembership::Transcendental => "transcendental".to_string(),
                        NonMembership::AlgebraicOfDegree { degree } => format!("algebraic of degree {degree}"),
                    };
                    (json!({"member": false, "reason": reason}), format!("not a member ({text})"))
                }
            };
            if *minpoly {
                let mp = d.minimal_polynomial(&x)?;
                let value = match &mp {
                    MinimalPolynomial::Transcendental => json!("transcendental"),
                    MinimalPolynomial::MinPoly { degree, separable, relation, .. } => json!({
                        "degree": degree,
                        "separable": separable,
                        "coefficients": strings(&mp.eval_coeffs(&d)?),
                        "relation": relation.to_string(),
                    }),
                };
                summary.push_str(&format!("\nminimal polynomial: {}", render_minpoly(&mp, &d)?));
                result["minimal_polynomial"] = value;
            }
            Ok(Outcome { result, summary })
        }
        Command::Locus { a, base } => {
            let c = s.subfield(base)?;
            let l = locus(&s.tuple(a)?, &c)?;
            let gens: Vec<String> = l.basis.iter().map(|g| g.to_string()).collect();
            let summary = if gens.is_empty() { "<0>".to_string() } else { format!("<{}>", gens.join(", ")) };
            Ok(Outcome { result: json!({"generators": gens, "dimension": l.dimension}), summary })
        }
        Command::Hensel { system, x, y0, prec, xvars, yvars, center } => {
            hensel(&s, system, x, y0, *prec, xvars.as_deref(), yvars.as_deref(), center.as_deref())
        }
        Command::Surjectivity { a, b, base, samples, prec, mode, center } => {
            let c = s.subfield(base)?;
            let params = SurjectivityParams {
                samples: *samples,
                precision: *prec,
                seed: args.seed,
                mode: match mode {
                    ModeArg::Auto => SurjectivityMode::Auto,
                    ModeArg::Direct => SurjectivityMode::Direct,
                    ModeArg::Lambda => SurjectivityMode::Lambda,
                },
                center: center.as_deref().map(|c| parse_center(s.k.field(), c)).transpose()?,
                exec: s.exec(),
            };
            let r = local_surjectivity_check(&s.tuple(a)?, &s.tuple(b)?, &c, &params)?;
            let summary = format!("{}/{} samples lifted at precision {}", r.lifted, r.samples, r.precision);
            Ok(Outcome { result: serde_json::to_value(&r).unwrap(), summary })
        }
        Command::InteriorScan { .. } | Command::Batch { .. } => unreachable!("handled by the caller"),
    }
}

fn pair_fields(s: &Session, pair: &PairArgs) -> Result<(SubfieldPresentation, SubfieldPresentation)> {
    let d = s.subfield(&pair.sub)?;
    let e = if pair.ext.trim().is_empty() { SubfieldPresentation::whole(&s.k) } else { s.subfield(&pair.ext)? };
    Ok((d, e))
}

fn render_minpoly(mp: &MinimalPolynomial, d: &SubfieldPresentation) -> Result<String> {
    let coeffs = match mp {
        MinimalPolynomial::Transcendental => return Ok("none (transcendental)".into()),
        MinimalPolynomial::MinPoly { .. } => mp.eval_coeffs(d)?,
    };
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| {
            let power = match j {
                0 => String::new(),
                1 => "X".into(),
                _ => format!("X^{j}"),
            };
            match (j, c.is_one()) {
                (0, _) => format!("({c})"),
                (_, true) => power,
                _ => format!("({c})*{power}"),
            }
        })
        .collect();
    Ok(terms.join(" + "))
}

fn parse_center(f: &Fq, src: &str) -> Result<Vec<u32>> {
    let k = AmbientField::new(f.clone(), &[])?;
    split_list(src, ',')
        .into_iter()
        .map(|c| {
            let v = k.parse(c)?;
            v.num()
                .constant_value()
                .filter(|_| v.den().is_one())
                .ok_or_else(|| Error::invalid(format!("center entry `{c}` is not a constant")))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn hensel(
    s: &Session,
    system: &str,
    x: &str,
    y0: &str,
    prec: usize,
    xvars: Option<&str>,
    yvars: Option<&str>,
    center: Option<&str>,
) -> Result<Outcome> {
    let srcs = split_list(system, ';');
    let mut seen: Vec<String> = Vec::new();
    for src in &srcs {
        for v in parse_expr(src)?.variables() {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
    }
    let block = |given: Option<&str>, prefix: char| -> Vec<String> {
        match given {
            Some(g) => split_list(g, ',').into_iter().map(String::from).collect(),
            None => seen.iter().filter(|v| v.starts_with(prefix)).cloned().collect(),
        }
    };
    let xs = block(xvars, 'x');
    let ys = block(yvars, 'y');
    if let Some(stray) = seen.iter().find(|v| !xs.contains(v) && !ys.contains(v)) {
        return Err(Error::invalid(format!("`{stray}` is in neither the parameter nor the unknown block")));
    }
    let names: Vec<&str> = xs.iter().chain(&ys).map(String::as_str).collect();
    let sys_field = AmbientField::new(s.k.field().clone(), &names)?;
    let polys = srcs
        .iter()
        .map(|src| {
            let f = sys_field.parse(src)?;
            if !f.is_polynomial() {
                return Err(Error::invalid(format!("`{src}` is not a polynomial")));
            }
            Ok(f.num().clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let sys = NewtonSystem::new(sys_field.ring(), polys, (xs.len()..names.len()).collect())?;
    let xv = s.tuple(x)?;
    let yv = s.tuple(y0)?;
    if xv.len() != xs.len() || yv.len() != ys.len() {
        return Err(Error::invalid(format!(
            "expected {} parameter and {} starting values, got {} and {}",
            xs.len(),
            ys.len(),
            xv.len(),
            yv.len()
        )));
    }
    let center = match center {
        Some(c) => parse_center(s.k.field(), c)?,
        None => vec![0; s.k.n()],
    };
    if center.len() != s.k.n() {
        return Err(Error::invalid("center needs one value per ambient variable"));
    }
    let point = xv.iter().chain(&yv).map(|v| embed(&s.k, v, &center, prec)).collect::<Result<Vec<_>>>()?;
    let out = hensel_newton(&sys, &point, prec)?;
    let var = s.k.ring().vars().first().map_or("t", String::as_str).to_string();
    let values: Vec<String> = out.unknown_values(&sys).iter().map(|v| v.render(&var)).collect();
    let rows: Vec<Value> = ys.iter().zip(&values).map(|(n, v)| json!({"var": n, "value": v})).collect();
    let summary = ys.iter().zip(&values).map(|(n, v)| format!("{n} = {v}")).collect::<Vec<_>>().join("\n");
    Ok(Outcome {
        result: json!({
            "solution": rows,
            "steps": out.steps,
            "residual_valuations": out.residual_valuations,
            "jacobian_valuation": out.jacobian_valuation,
            "precision": prec,
        }),
        summary,
    })
}
