//! JSON problem files.
//!
//! Keys `kind` (`"pseudolinear"` or `"pseudoquadratic"`), `U`, `V`, `b`,
//! `d`, `p`, `q` and, for quadratic problems, `C`. Entries are integers,
//! `"num/den"` strings, or `"-inf"` / `"+inf"`. The canonical form written by
//! [`write_problem`] has sorted keys and no whitespace.
//!
//! ```
//! use tropopt::io::{parse_problem, write_problem};
//!
//! let text = r#"{"U":[],"V":[],"b":[],"d":[],"kind":"pseudolinear","p":["1/2"],"q":["+inf"]}"#;
//! let prob = parse_problem(text.as_bytes()).unwrap();
//! assert_eq!(write_problem(&prob), text);
//! ```

use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::matrix::TropMatrix;
use crate::pseudolinear::PseudolinearProblem;
use crate::pseudoquadratic::PseudoquadraticProblem;
use crate::scalar::{format_rational, parse_rational, ExtScalar};

/// Either problem family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    Linear(PseudolinearProblem),
    Quadratic(PseudoquadraticProblem),
}

impl Problem {
    /// The pseudolinear part.
    pub fn base(&self) -> &PseudolinearProblem {
        match self {
            Problem::Linear(p) => p,
            Problem::Quadratic(p) => p.base(),
        }
    }
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedJson(msg.into())
}

fn scalar_from(v: &Value, key: &str) -> Result<ExtScalar> {
    match v {
        Value::Number(num) => match num.as_i64() {
            Some(i) => Ok(ExtScalar::int(i)),
            None => Err(Error::BadRational(format!("{num} in {key}"))),
        },
        Value::String(s) => match s.trim() {
            "-inf" => Ok(ExtScalar::NegInf),
            "+inf" => Ok(ExtScalar::PosInf),
            other => parse_rational(other).map(ExtScalar::Finite),
        },
        other => Err(malformed(format!("entry of {key} must be a number or string, got {other}"))),
    }
}

fn scalar_to(v: &ExtScalar) -> Value {
    match v {
        ExtScalar::NegInf => Value::from("-inf"),
        ExtScalar::PosInf => Value::from("+inf"),
        ExtScalar::Finite(r) => match r.is_integer().then(|| r.numer().to_i64()).flatten() {
            Some(i) => Value::from(i),
            None => Value::from(format_rational(r)),
        },
    }
}

fn vector_from(obj: &Map<String, Value>, key: &str) -> Result<Vec<ExtScalar>> {
    let v = obj.get(key).ok_or_else(|| malformed(format!("missing key {key}")))?;
    let arr = v.as_array().ok_or_else(|| malformed(format!("{key} must be an array")))?;
    arr.iter().map(|x| scalar_from(x, key)).collect()
}

fn matrix_from(obj: &Map<String, Value>, key: &str, cols: usize) -> Result<TropMatrix> {
    let v = obj.get(key).ok_or_else(|| malformed(format!("missing key {key}")))?;
    let arr = v.as_array().ok_or_else(|| malformed(format!("{key} must be an array of rows")))?;
    let mut entries = Vec::new();
    for (i, row) in arr.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| malformed(format!("row {i} of {key} must be an array")))?;
        if row.len() != cols {
            return Err(Error::DimensionMismatch(format!("row {i} of {key} has {} entries, expected {cols}", row.len())));
        }
        for x in row {
            entries.push(scalar_from(x, key)?);
        }
    }
    TropMatrix::new(arr.len(), cols, crate::Typing::MaxPlus, entries)
}

/// Parses and validates a problem file.
pub fn parse_problem(bytes: &[u8]) -> Result<Problem> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| malformed(e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| malformed("top level must be an object"))?;
    let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| malformed("missing string key kind"))?;
    let quadratic = match kind {
        "pseudolinear" => false,
        "pseudoquadratic" => true,
        other => return Err(malformed(format!("unknown kind {other:?}"))),
    };
    let allowed: &[&str] = if quadratic {
        &["C", "U", "V", "b", "d", "kind", "p", "q"]
    } else {
        &["U", "V", "b", "d", "kind", "p", "q"]
    };
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(malformed(format!("unexpected key {k}")));
    }
    let p = vector_from(obj, "p")?;
    let q = vector_from(obj, "q")?;
    let n = p.len();
    let base = PseudolinearProblem::new(
        matrix_from(obj, "U", n)?,
        matrix_from(obj, "V", n)?,
        vector_from(obj, "b")?,
        vector_from(obj, "d")?,
        p,
        q,
    )?;
    if quadratic {
        let c = matrix_from(obj, "C", n)?;
        Ok(Problem::Quadratic(PseudoquadraticProblem::new(base, c)?))
    } else {
        Ok(Problem::Linear(base))
    }
}

fn vector_to(v: &[ExtScalar]) -> Value {
    Value::Array(v.iter().map(scalar_to).collect())
}

fn matrix_to(m: &TropMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to(m.row(i))).collect())
}

/// Canonical JSON: sorted keys, no whitespace.
pub fn write_problem(prob: &Problem) -> String {
    let base = prob.base();
    let mut obj = Map::new();
    obj.insert("U".into(), matrix_to(base.u()));
    obj.insert("V".into(), matrix_to(base.v()));
    obj.insert("b".into(), vector_to(base.b()));
    obj.insert("d".into(), vector_to(base.d()));
    obj.insert("p".into(), vector_to(base.p()));
    obj.insert("q".into(), vector_to(base.q()));
    let kind = match prob {
        Problem::Linear(_) => "pseudolinear",
        Problem::Quadratic(p) => {
            obj.insert("C".into(), matrix_to(p.c()));
            "pseudoquadratic"
        }
    };
    obj.insert("kind".into(), Value::from(kind));
    Value::Object(obj).to_string()
}

/// Formats an extended scalar the way problem files do, as a plain string.
pub fn format_scalar(v: &ExtScalar) -> String {
    match v {
        ExtScalar::NegInf => "-inf".into(),
        ExtScalar::PosInf => "+inf".into(),
        ExtScalar::Finite(r) => format_rational(r),
    }
}

/// Parses `"num/den"`, an integer, `"-inf"` or `"+inf"`.
pub fn parse_scalar(s: &str) -> Result<ExtScalar> {
    scalar_from(&Value::from(s), "argument")
}

