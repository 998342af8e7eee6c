//! Quiver files and inline bipartite data.

use std::collections::BTreeMap;
use std::path::Path;

use jkscatter::exact::parse_rational;
use jkscatter::quiver::{check_normalized, Quiver};
use jkscatter::Rational;
use serde::Deserialize;

use crate::report::Failure;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverFile {
    vertices: Vec<String>,
    arrows: Vec<ArrowSpec>,
    dimension: BTreeMap<String, i64>,
    stability: BTreeMap<String, Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowSpec {
    tail: String,
    head: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Value {
    Text(String),
    Int(i64),
}

/// A validated quiver with dimension vector and normalized stability.
pub struct Problem {
    pub quiver: Quiver,
    pub dimension: Vec<u32>,
    pub stability: Vec<Rational>,
}

pub fn parse_quiver_str(text: &str) -> Result<Problem, Failure> {
    let file: QuiverFile = serde_json::from_str(text).map_err(|e| Failure::parse(e.line(), e.column(), e.to_string()))?;
    let arrows: Vec<(&str, &str)> = file.arrows.iter().map(|a| (a.tail.as_str(), a.head.as_str())).collect();
    let names: Vec<&str> = file.vertices.iter().map(String::as_str).collect();
    let quiver = Quiver::from_names(&names, &arrows).map_err(Failure::validation)?;
    quiver.validate(false).map_err(Failure::validation)?;
    for key in file.dimension.keys().chain(file.stability.keys()) {
        if !file.vertices.contains(key) {
            return Err(Failure::invalid(format!("unknown vertex {key:?}")));
        }
    }
    let mut dimension = Vec::new();
    let mut stability = Vec::new();
    for v in &file.vertices {
        let d = *file.dimension.get(v).ok_or_else(|| Failure::invalid(format!("no dimension for vertex {v:?}")))?;
        dimension.push(u32::try_from(d).map_err(|_| Failure::invalid(format!("dimension of {v:?} must be a nonnegative integer")))?);
        let s = match file.stability.get(v) {
            Some(Value::Text(s)) => parse_rational(s).ok_or_else(|| Failure::invalid(format!("bad rational {s:?} for vertex {v:?}")))?,
            Some(Value::Int(k)) => Rational::from_integer((*k).into()),
            None => return Err(Failure::invalid(format!("no stability for vertex {v:?}"))),
        };
        stability.push(s);
    }
    check_normalized(&dimension, &stability).map_err(Failure::validation)?;
    Ok(Problem { quiver, dimension, stability })
}

pub fn parse_quiver_file(path: &Path) -> Result<Problem, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    parse_quiver_str(&text)
}

/// `"1,1;1"` for a bipartite quiver: sources, then sinks. Without a semicolon
/// the list is read flat.
fn blocks<T>(text: &str, l1: usize, l2: usize, what: &str, item: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, Failure> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() > 2 {
        return Err(Failure::invalid(format!("{what}: at most one ';' separating sources from sinks")));
    }
    let split = |s: &str| -> Result<Vec<T>, Failure> {
        s.split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| item(x).ok_or_else(|| Failure::invalid(format!("{what}: cannot read {x:?}"))))
            .collect()
    };
    let lists: Vec<Vec<T>> = parts.into_iter().map(split).collect::<Result<_, _>>()?;
    if lists.len() == 2 && (lists[0].len() != l1 || lists[1].len() != l2) {
        return Err(Failure::invalid(format!("{what}: expected {l1} source and {l2} sink entries")));
    }
    let flat: Vec<T> = lists.into_iter().flatten().collect();
    if flat.len() != l1 + l2 {
        return Err(Failure::invalid(format!("{what}: expected {} entries, got {}", l1 + l2, flat.len())));
    }
    Ok(flat)
}

pub fn parse_dimension(text: &str, l1: usize, l2: usize) -> Result<Vec<u32>, Failure> {
    blocks(text, l1, l2, "--d", |s| s.parse().ok())
}

pub fn parse_stability(text: &str, l1: usize, l2: usize) -> Result<Vec<Rational>, Failure> {
    blocks(text, l1, l2, "--zeta", parse_rational)
}

pub fn bipartite_problem(l1: usize, l2: usize, d: &str, zeta: &str) -> Result<Problem, Failure> {
    if l1 == 0 || l2 == 0 {
        return Err(Failure::invalid("--l1 and --l2 must be at least 1".into()));
    }
    let dimension = parse_dimension(d, l1, l2)?;
    let stability = parse_stability(zeta, l1, l2)?;
    check_normalized(&dimension, &stability).map_err(Failure::validation)?;
    Ok(Problem { quiver: Quiver::bipartite(l1, l2), dimension, stability })
}

pub fn parse_rational_list(text: &str, what: &str) -> Result<Vec<Rational>, Failure> {
    text.split([',', ';'])
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| parse_rational(x).ok_or_else(|| Failure::invalid(format!("{what}: cannot read {x:?}"))))
        .collect()
}

pub fn parse_direction(text: &str) -> Result<(i64, i64), Failure> {
    let v: Vec<i64> = text
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| Failure::invalid(format!("--ray: cannot read {x:?}"))))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b] => Ok((a, b)),
        _ => Err(Failure::invalid("--ray takes two integers a,b".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use jkscatter::exact::int;

    const K21: &str = r#"{
        "vertices": ["i1", "i2", "j1"],
        "arrows": [{"tail": "i1", "head": "j1"}, {"tail": "i2", "head": "j1"}],
        "dimension": {"i1": 1, "i2": 1, "j1": 1},
        "stability": {"i1": "1/1", "i2": "1/1", "j1": "-2/1"}
    }"#;

    #[test]
    fn reads_fixture() {
        let p = parse_quiver_str(K21).unwrap();
        assert_eq!(p.quiver.vertex_count(), 3);
        assert_eq!(p.quiver.arrow_count(), 2);
        assert_eq!(p.stability, vec![int(1), int(1), int(-2)]);
    }

    #[test]
    fn rejects_bad_files() {
        let e = parse_quiver_str(&K21.replace("-2/1", "-1/1")).err().unwrap();
        assert_eq!(e.rule.as_deref(), Some("normalization"));
        let e = parse_quiver_str(&K21.replace(r#""tail": "i2", "head": "j1""#, r#""tail": "i2", "head": "i2""#)).err().unwrap();
        assert_eq!(e.rule.as_deref(), Some("loop"));
        let cyc = K21.replace(r#"{"tail": "i2", "head": "j1"}"#, r#"{"tail": "j1", "head": "i1"}"#);
        assert_eq!(parse_quiver_str(&cyc).err().unwrap().rule.as_deref(), Some("cycle"));
        let e = parse_quiver_str("{\n  \"vertices\": [\"a\",]\n}").err().unwrap();
        assert_eq!(e.kind, "ParseError");
        assert_eq!(e.position.map(|p| p.0), Some(2));
    }

    #[test]
    fn inline_lists() {
        assert_eq!(parse_dimension("1,1;1", 2, 1).unwrap(), vec![1, 1, 1]);
        assert_eq!(parse_dimension("1,1,1", 2, 1).unwrap(), vec![1, 1, 1]);
        assert!(parse_dimension("1;1,1", 2, 1).is_err());
        assert_eq!(parse_stability("1,1,-2", 2, 1).unwrap(), vec![int(1), int(1), int(-2)]);
        assert!(bipartite_problem(2, 1, "1,1;1", "1,1,-1").is_err());
        assert_eq!(parse_direction("2,1").unwrap(), (2, 1));
    }
}
