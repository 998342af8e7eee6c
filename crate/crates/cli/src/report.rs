//! Report assembly, error classification and exit codes.

use jkscatter::exact::fmt_rational;
use jkscatter::{Error, Rational, Witness};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NON_REGULAR: i32 = 3;

pub fn rs(x: &Rational) -> Value {
    Value::String(fmt_rational(x))
}

pub fn qs(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rs).collect())
}

pub fn witness(w: &Witness) -> Value {
    match w {
        Witness::Wall { zeta, generators, coefficients } => json!({
            "kind": "wall",
            "zeta": qs(zeta),
            "generators": generators.iter().map(|g| qs(g)).collect::<Vec<_>>(),
            "coefficients": qs(coefficients),
        }),
        Witness::Tree { tree, arrow } => json!({ "kind": "tree", "tree": tree, "arrow": arrow }),
        Witness::Term { index, inner } => json!({ "kind": "term", "index": index, "inner": witness(inner) }),
    }
}

/// Everything that ends a command with a nonzero exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: String,
    pub message: String,
    pub rule: Option<String>,
    pub position: Option<(usize, usize)>,
    pub witness: Option<Value>,
}

impl Failure {
    pub fn invalid(message: String) -> Self {
        Failure { code: EXIT_INPUT, kind: "InputError".into(), message, rule: None, position: None, witness: None }
    }

    pub fn parse(line: usize, column: usize, message: String) -> Self {
        Failure { kind: "ParseError".into(), position: Some((line, column)), ..Self::invalid(message) }
    }

    /// Quiver-file validation, tagged with the rule that failed.
    pub fn validation(e: Error) -> Self {
        let rule = match &e {
            Error::HasLoop { .. } => "loop",
            Error::HasOrientedCycle(_) => "cycle",
            Error::NotNormalized(_) => "normalization",
            Error::Disconnected => "connectivity",
            Error::UnknownVertex(_) => "vertex",
            _ => return e.into(),
        };
        Failure { kind: "ValidationError".into(), rule: Some(rule.into()), ..Self::invalid(e.to_string()) }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "kind": self.kind, "message": self.message });
        if let Some(r) = &self.rule {
            v["rule"] = json!(r);
        }
        if let Some((line, column)) = self.position {
            v["position"] = json!({ "line": line, "column": column });
        }
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::ZeroDenominator => "ZeroDenominator",
            Error::SingularBasis => "SingularBasis",
            Error::BadConstantTerm(_) => "BadConstantTerm",
            Error::HasLoop { .. } | Error::HasOrientedCycle(_) | Error::NotNormalized(_) | Error::Disconnected | Error::UnknownVertex(_) => {
                return Failure::validation(e)
            }
            Error::NonRegularStability(_) => "NonRegularStability",
            Error::DegenerateRCharges(_) => "DegenerateRCharges",
            Error::NotSumRegular(_) => "NotSumRegular",
            Error::NotATree => "NotATree",
            Error::BadCutoff => "BadCutoff",
            Error::CutoffTooSmall { .. } => "CutoffTooSmall",
            Error::Invalid(_) => "InvalidInput",
        };
        let w = match &e {
            Error::NonRegularStability(w) | Error::NotSumRegular(w) => Some(witness(w)),
            _ => None,
        };
        let code = if matches!(e, Error::NonRegularStability(_)) { EXIT_NON_REGULAR } else { EXIT_INPUT };
        Failure { code, kind: kind.into(), message: e.to_string(), rule: None, position: None, witness: w }
    }
}

/// A flat table for `--csv`.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> Result<String, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Failure::invalid(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Failure::invalid(e.to_string()))
    }
}

pub fn join(v: &[Rational]) -> String {
    v.iter().map(fmt_rational).collect::<Vec<_>>().join(";")
}

/// What a command hands back: its JSON result, its table and the exit code.
pub struct Outcome {
    pub inputs: Value,
    pub result: Value,
    pub table: Table,
    pub code: i32,
}
