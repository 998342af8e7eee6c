//! One function per subcommand.

use jkscatter::arrangement::{build_arrangement, jk_global, quiver_zeta, singular_points, ChargeMode, RCharges};
use jkscatter::exact::{fmt_rational, int, parse_rational};
use jkscatter::quiver::{moduli_dimension, spanning_trees, tree_components, Quiver};
use jkscatter::quiver_jk::{build_zq, jk_ab_infinity_terms, jk_ab_terms, jk_tree_expansion, lambda_sweep, SignMode, TermValue};
use jkscatter::scattering::{extract_cd, init_bipartite, primitive, scatter, verify_main_theorem, Support};
use jkscatter::{Error, Rational, Witness};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::input::{parse_direction, parse_rational_list, Problem};
use crate::report::{join, qs, rs, Failure, Outcome, Table, EXIT_FAIL, EXIT_OK};

fn arrow_name(q: &Quiver, a: usize) -> String {
    let (t, h) = q.arrows()[a];
    format!("{}->{}", q.name(t), q.name(h))
}

pub fn describe(p: &Problem) -> Value {
    json!({
        "vertices": p.quiver.vertices(),
        "arrows": (0..p.quiver.arrow_count()).map(|a| arrow_name(&p.quiver, a)).collect::<Vec<_>>(),
        "dimension": p.dimension,
        "stability": qs(&p.stability),
    })
}

/// The full subquiver on the support of `d`, with `d` and the stability restricted.
fn support(p: &Problem) -> (Quiver, Vec<u32>, Vec<Rational>) {
    let keep: Vec<bool> = p.dimension.iter().map(|&x| x > 0).collect();
    let (q, old) = p.quiver.restrict(&keep);
    let d = old.iter().map(|&v| p.dimension[v]).collect();
    let th = old.iter().map(|&v| p.stability[v].clone()).collect();
    (q, d, th)
}

fn abelian_support(p: &Problem, what: &str) -> Result<(Quiver, Vec<Rational>), Failure> {
    if p.dimension.iter().any(|&x| x > 1) {
        return Err(Failure::invalid(format!("{what} needs an abelian dimension vector (entries 0 or 1)")));
    }
    let (q, _, th) = support(p);
    q.validate(true)?;
    Ok((q, th))
}

fn parse_lambda(text: &str) -> Result<Rational, Failure> {
    let l = parse_rational(text).ok_or_else(|| Failure::invalid(format!("--lambda: cannot read {text:?}")))?;
    if !l.is_positive() {
        return Err(Failure::invalid("--lambda must be positive".into()));
    }
    Ok(l)
}

fn parse_rcharges(text: &str) -> Result<RCharges, Failure> {
    match text.strip_prefix("seed:") {
        Some(s) => s.trim().parse().map(RCharges::Seed).map_err(|_| Failure::invalid(format!("--rcharges: bad seed {s:?}"))),
        None => Ok(RCharges::Explicit(parse_rational_list(text, "--rcharges")?)),
    }
}

pub fn trees(p: &Problem) -> Result<Outcome, Failure> {
    let (q, th) = abelian_support(p, "trees")?;
    let (qbar, mult, _) = q.reduced();
    let mut rows = Vec::new();
    let mut table = Table::new(&["tree", "arrows", "components", "stable", "contribution"]);
    let mut count = Rational::zero();
    for (id, t) in spanning_trees(&qbar)?.into_iter().enumerate() {
        let c = tree_components(&qbar, &t, &th)?;
        if let Some(k) = c.iter().position(|x| x.is_zero()) {
            return Err(Error::NonRegularStability(Witness::Tree { tree: t.arrows.clone(), arrow: t.arrows[k] }).into());
        }
        let stable = c.iter().all(|x| x.is_negative());
        let weight: Rational = t.arrows.iter().map(|&a| int(mult[a] as i64)).product();
        let contribution = if stable { weight } else { Rational::zero() };
        count += &contribution;
        let names: Vec<String> = t.arrows.iter().map(|&a| arrow_name(&qbar, a)).collect();
        table.push(vec![id.to_string(), names.join(";"), join(&c), stable.to_string(), fmt_rational(&contribution)]);
        rows.push(json!({
            "id": id,
            "arrows": names,
            "multiplicities": t.arrows.iter().map(|&a| mult[a]).collect::<Vec<_>>(),
            "components": qs(&c),
            "stable": stable,
            "contribution": rs(&contribution),
        }));
    }
    Ok(Outcome { inputs: describe(p), result: json!({ "trees": rows, "weist_count": rs(&count) }), table, code: EXIT_OK })
}

pub struct JkOptions<'a> {
    pub lambda: &'a str,
    pub rcharges: &'a str,
    pub split: bool,
    pub sign: SignMode,
}

pub fn jk(p: &Problem, o: &JkOptions) -> Result<Outcome, Failure> {
    let (q, d, th) = support(p);
    q.validate(true)?;
    let lambda = parse_lambda(o.lambda)?;
    let mode = if o.split { ChargeMode::Split } else { ChargeMode::Literal };
    let a = build_arrangement(&q, &d, None, &parse_rcharges(o.rcharges)?, mode)?.scaled(&lambda);
    let f = build_zq(&q, &d, &a, o.sign)?;
    let zeta = quiver_zeta(&a, &th)?;
    let value = jk_global(&f, &a, &zeta)?;
    let points = singular_points(&a)?.len();
    let mut result = json!({
        "value": rs(&value),
        "lambda": rs(&lambda),
        "rcharges": qs(&a.rcharges),
        "charge_mode": if o.split { "split" } else { "literal" },
        "sign_mode": if o.sign == SignMode::Mero { "mero" } else { "paper" },
        "zeta": qs(&zeta),
        "singular_points": points,
    });
    let mut table = Table::new(&["tree", "lift", "components", "stable", "contribution"]);
    if d.iter().all(|&x| x == 1) {
        let (tree_value, terms) = jk_tree_expansion(&q, &th, &a)?;
        let s = if o.sign == SignMode::Mero && moduli_dimension(&q, &d) % 2 != 0 { int(-1) } else { int(1) };
        let (qbar, _, _) = q.reduced();
        let mut rows = Vec::new();
        for (id, t) in terms.iter().enumerate() {
            let contribution = &s * &t.value;
            let lift: Vec<String> = t.lift.iter().map(|&c| c.to_string()).collect();
            table.push(vec![id.to_string(), lift.join(";"), join(&t.components), t.stable.to_string(), fmt_rational(&contribution)]);
            rows.push(json!({
                "id": id,
                "arrows": t.tree.arrows.iter().map(|&x| arrow_name(&qbar, x)).collect::<Vec<_>>(),
                "lift": t.lift,
                "components": qs(&t.components),
                "point": qs(&t.point),
                "stable": t.stable,
                "contribution": rs(&contribution),
            }));
        }
        result["trees"] = json!(rows);
        result["tree_value"] = rs(&(s * tree_value));
    } else {
        table.push(vec!["-".into(), "-".into(), "-".into(), "-".into(), fmt_rational(&value)]);
    }
    Ok(Outcome { inputs: describe(p), result, table, code: EXIT_OK })
}

fn term_rows(terms: &[TermValue], table: &mut Table) -> Vec<Value> {
    terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let c = &t.coefficient * &t.value;
            table.push(vec![i.to_string(), fmt_rational(&t.coefficient), fmt_rational(&t.value), fmt_rational(&c)]);
            json!({ "index": i, "coefficient": rs(&t.coefficient), "value": rs(&t.value), "contribution": rs(&c) })
        })
        .collect()
}

pub fn jk_ab(p: &Problem, infinity: bool, lambda: &str, seed: u64, sweep: Option<&str>) -> Result<Outcome, Failure> {
    p.quiver.validate(false)?;
    let mut table = Table::new(&["term", "coefficient", "value", "contribution"]);
    let result = if let Some(list) = sweep {
        let lambdas = parse_rational_list(list, "--sweep")?;
        if lambdas.iter().any(|l| !l.is_positive()) {
            return Err(Failure::invalid("--sweep values must be positive".into()));
        }
        let (limit, rows) = lambda_sweep(&p.quiver, &p.dimension, &p.stability, seed, &lambdas)?;
        table = Table::new(&["lambda", "value", "distance"]);
        table.push(vec!["infinity".into(), fmt_rational(&limit), "0/1".into()]);
        for r in &rows {
            table.push(vec![fmt_rational(&r.lambda), fmt_rational(&r.value), fmt_rational(&r.distance)]);
        }
        json!({
            "seed": seed,
            "limit": rs(&limit),
            "sweep": rows.iter().map(|r| json!({ "lambda": rs(&r.lambda), "value": rs(&r.value), "distance": rs(&r.distance) })).collect::<Vec<_>>(),
        })
    } else if infinity {
        let (value, terms) = jk_ab_infinity_terms(&p.quiver, &p.dimension, &p.stability)?;
        json!({ "value": rs(&value), "limit": true, "terms": term_rows(&terms, &mut table) })
    } else {
        let l = parse_lambda(lambda)?;
        let (value, terms) = jk_ab_terms(&p.quiver, &p.dimension, &p.stability, seed, &l, ChargeMode::Split)?;
        json!({ "value": rs(&value), "lambda": rs(&l), "seed": seed, "terms": term_rows(&terms, &mut table) })
    };
    Ok(Outcome { inputs: describe(p), result, table, code: EXIT_OK })
}

fn parameter_names(l1: usize, l2: usize) -> Vec<String> {
    (1..=l1).map(|i| format!("s{i}")).chain((1..=l2).map(|j| format!("t{j}"))).collect()
}

pub fn scatter_walls(l1: usize, l2: usize, order: u32, ray: Option<&str>) -> Result<Outcome, Failure> {
    let filter = ray.map(parse_direction).transpose()?.map(|r| primitive(r).0);
    let d = scatter(&init_bipartite(l1, l2, order)?)?;
    let names = parameter_names(l1, l2);
    let mut table = Table::new(&["a", "b", "support", "function"]);
    let mut walls = Vec::new();
    for w in d.walls() {
        if filter.is_some_and(|r| r != w.direction || w.support != Support::Ray) {
            continue;
        }
        let support = if w.support == Support::Line { "line" } else { "ray" };
        let f = w.function.display_with(&names);
        table.push(vec![w.direction.0.to_string(), w.direction.1.to_string(), support.into(), f.clone()]);
        walls.push(json!({ "direction": [w.direction.0, w.direction.1], "support": support, "function": f }));
    }
    let inputs = json!({ "l1": l1, "l2": l2, "order": order, "parameters": names });
    Ok(Outcome { inputs, result: json!({ "walls": walls }), table, code: EXIT_OK })
}

pub fn extract(l1: usize, l2: usize, dim: &[u32], order: u32) -> Result<Outcome, Failure> {
    let d = scatter(&init_bipartite(l1, l2, order)?)?;
    let c = extract_cd(&d, l1, dim)?;
    let a: i64 = dim[..l1].iter().map(|&x| x as i64).sum();
    let b: i64 = dim[l1..].iter().map(|&x| x as i64).sum();
    let (r, k) = primitive((a, b));
    let mut table = Table::new(&["d", "a", "b", "k", "c_d"]);
    let ds: Vec<String> = dim.iter().map(u32::to_string).collect();
    table.push(vec![ds.join(";"), r.0.to_string(), r.1.to_string(), k.to_string(), fmt_rational(&c)]);
    let inputs = json!({ "l1": l1, "l2": l2, "order": order, "dimension": dim });
    let result = json!({ "c_d": rs(&c), "ray": [r.0, r.1], "k": k, "ray_present": d.ray(r).is_some() });
    Ok(Outcome { inputs, result, table, code: EXIT_OK })
}

pub fn verify(l1: usize, l2: usize, p: &Problem, order: u32) -> Result<Outcome, Failure> {
    let v = verify_main_theorem(l1, l2, &p.dimension, &p.stability, order)?;
    let mut table = Table::new(&["lhs", "rhs", "moduli_dimension", "jk_infinity", "pass"]);
    table.push(vec![
        fmt_rational(&v.lhs),
        fmt_rational(&v.rhs),
        v.moduli_dimension.to_string(),
        fmt_rational(&v.jk_infinity),
        v.pass.to_string(),
    ]);
    let result = json!({
        "pass": v.pass,
        "c_d": rs(&v.lhs),
        "rhs": rs(&v.rhs),
        "moduli_dimension": v.moduli_dimension,
        "jk_ab_infinity": rs(&v.jk_infinity),
    });
    let mut inputs = describe(p);
    inputs["order"] = json!(order);
    Ok(Outcome { inputs, result, table, code: if v.pass { EXIT_OK } else { EXIT_FAIL } })
}
