//! The lattice file format: a strict JSON object with a square integer
//! `gram` matrix and optional `name`, `point`, and `basis` fields.
//! Integers of arbitrary size are accepted and reproduced bit-exactly.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{Map, Number, Value};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct LatticeFile {
    pub name: Option<String>,
    pub gram: Vec<Vec<BigInt>>,
    pub point: Option<Vec<BigInt>>,
    pub basis: Option<Vec<Vec<BigInt>>>,
}

pub fn parse_lattice_file(text: &str) -> Result<LatticeFile, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        CliError::Invalid(format!(
            "parse error at line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::Invalid("input must be a JSON object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "name" | "gram" | "point" | "basis") {
            return Err(CliError::Invalid(format!("unknown field: {key}")));
        }
    }
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(CliError::Invalid("name must be a string".into())),
    };
    let gram_value = obj
        .get("gram")
        .ok_or_else(|| CliError::Invalid("missing field: gram".into()))?;
    let gram = parse_int_matrix(gram_value, "gram")?;
    let n = gram.len();
    if gram.iter().any(|row| row.len() != n) {
        return Err(CliError::Invalid("gram must be a square matrix".into()));
    }
    let point = match obj.get("point") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let p = parse_int_vector(v, "point")?;
            if p.len() != n {
                return Err(CliError::Invalid(format!(
                    "point has length {}, expected {n}",
                    p.len()
                )));
            }
            Some(p)
        }
    };
    let basis = match obj.get("basis") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let rows = parse_int_matrix(v, "basis")?;
            if rows.iter().any(|row| row.len() != n) {
                return Err(CliError::Invalid(format!(
                    "basis vectors must have length {n}"
                )));
            }
            Some(rows)
        }
    };
    Ok(LatticeFile { name, gram, point, basis })
}

fn parse_int_matrix(v: &Value, field: &str) -> Result<Vec<Vec<BigInt>>, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| CliError::Invalid(format!("{field} must be an array of arrays")))?;
    let mut out = Vec::with_capacity(rows.len());
    let widths: Vec<usize> = rows
        .iter()
        .map(|r| r.as_array().map(|a| a.len()).unwrap_or(0))
        .collect();
    if let (Some(first), true) = (widths.first(), widths.len() > 1) {
        if widths.iter().any(|w| w != first) {
            return Err(CliError::Invalid(format!("{field} is ragged")));
        }
    }
    for row in rows {
        out.push(parse_int_vector(row, field)?);
    }
    Ok(out)
}

fn parse_int_vector(v: &Value, field: &str) -> Result<Vec<BigInt>, CliError> {
    let entries = v
        .as_array()
        .ok_or_else(|| CliError::Invalid(format!("{field} must be an array")))?;
    entries.iter().map(|e| parse_bigint(e, field)).collect()
}

fn parse_bigint(v: &Value, field: &str) -> Result<BigInt, CliError> {
    let n = v
        .as_number()
        .ok_or_else(|| CliError::Invalid(format!("{field} entries must be integers")))?;
    let s = n.to_string();
    if s.contains(['.', 'e', 'E']) {
        return Err(CliError::Invalid(format!(
            "{field} entries must be integers, got {s}"
        )));
    }
    BigInt::from_str(&s).map_err(|_| CliError::Invalid(format!("bad integer in {field}: {s}")))
}

pub fn json_int(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integer literal"))
}

pub fn json_int_vec(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(json_int).collect())
}

pub fn json_int_rows(rows: &[Vec<BigInt>]) -> Value {
    Value::Array(rows.iter().map(|r| json_int_vec(r)).collect())
}

pub fn lattice_file_value(file: &LatticeFile) -> Value {
    let mut obj = Map::new();
    if let Some(name) = &file.name {
        obj.insert("name".into(), Value::String(name.clone()));
    }
    obj.insert("gram".into(), json_int_rows(&file.gram));
    if let Some(point) = &file.point {
        obj.insert("point".into(), json_int_vec(point));
    }
    if let Some(basis) = &file.basis {
        obj.insert("basis".into(), json_int_rows(basis));
    }
    Value::Object(obj)
}
