//! JSON formats shared by the CLI and the C interface.
//!
//! Rationals travel as strings `"p/q"` or `"p"`. Polytopes are
//! `{"vertices": [["0", "1/2"], ...]}`.

use std::io::Read;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ehrhart::QuasiPolynomial;
use crate::polytope::Polytope;
use crate::rational::{format_rational, parse_rational, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub vertices: Vec<Vec<String>>,
}

impl PolytopeJson {
    pub fn from_polytope(p: &Polytope) -> Self {
        Self {
            vertices: p
                .vertices()
                .iter()
                .map(|v| v.iter().map(format_rational).collect())
                .collect(),
        }
    }
}

pub fn polytope_to_json(p: &Polytope) -> String {
    serde_json::to_string(&PolytopeJson::from_polytope(p)).expect("plain data")
}

fn coordinate(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        other => Err(Error::Parse(format!(
            "coordinate {other} must be a rational string or an integer"
        ))),
    }
}

/// Parses polytope JSON; integer literals are accepted alongside strings.
pub fn polytope_from_json(text: &str) -> Result<Polytope> {
    let v: Value = serde_json::from_str(text)?;
    let rows = v
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("expected an object with a \"vertices\" array".into()))?;
    let points = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("each vertex must be an array".into()))?
                .iter()
                .map(coordinate)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Polytope::new(points)
}

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

/// Hex SHA-256 of the input text.
pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn ser_rationals<S: Serializer>(
    rs: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(format_rational))
}

pub fn rationals_json(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(|r| Value::String(format_rational(r))).collect())
}

/// Exact coefficient strings when available, otherwise measured values.
pub fn polynomial_coefficients_json(p: &Polynomial) -> Value {
    match p.exact_coefficients() {
        Some(c) => rationals_json(&c),
        None => serde_json::to_value(p).expect("plain data"),
    }
}

pub fn quasi_json(q: &QuasiPolynomial) -> Value {
    json!({
        "period": q.period(),
        "constituents": q.constituents().iter().map(polynomial_coefficients_json).collect::<Vec<_>>(),
    })
}
