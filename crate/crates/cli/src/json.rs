//! Exact integers in JSON. Numbers keep every digit (serde_json is built
//! with arbitrary precision); strings of digits are accepted on input.

use num_bigint::BigInt;
use serde_json::{Map, Value};

use nfold_core::IntVec;

use crate::failure::{Failure, Outcome};

pub fn int(v: &BigInt) -> Value {
    Value::Number(v.to_string().parse().expect("integers are JSON numbers"))
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn bad(what: &str, expected: &str) -> Failure {
    Failure::Usage(format!("{what}: expected {expected}"))
}

pub fn parse_int(v: &Value, what: &str) -> Outcome<BigInt> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(bad(what, "an integer")),
    };
    text.parse().map_err(|_| bad(what, "an integer"))
}

pub fn parse_ints(v: &Value, what: &str) -> Outcome<Vec<BigInt>> {
    let items = v.as_array().ok_or_else(|| bad(what, "an array of integers"))?;
    items.iter().enumerate().map(|(i, e)| parse_int(e, &format!("{what}[{i}]"))).collect()
}

pub fn parse_vectors(v: &Value, what: &str) -> Outcome<Vec<IntVec>> {
    let rows = v.as_array().ok_or_else(|| bad(what, "an array of integer arrays"))?;
    rows.iter().enumerate().map(|(i, r)| Ok(IntVec::new(parse_ints(r, &format!("{what}[{i}]"))?))).collect()
}

pub fn parse_count(v: &Value, what: &str) -> Outcome<usize> {
    v.as_u64().and_then(|c| usize::try_from(c).ok()).ok_or_else(|| bad(what, "a nonnegative integer"))
}

pub fn parse_counts(v: &Value, what: &str) -> Outcome<Vec<usize>> {
    let items = v.as_array().ok_or_else(|| bad(what, "an array of nonnegative integers"))?;
    items.iter().enumerate().map(|(i, e)| parse_count(e, &format!("{what}[{i}]"))).collect()
}

pub fn object<'a>(v: &'a Value, what: &str) -> Outcome<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(what, "an object"))
}

pub fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Outcome<&'a Value> {
    obj.get(name).ok_or_else(|| Failure::Usage(format!("missing field {name:?}")))
}

pub fn schema(v: &Value) -> Outcome<&str> {
    object(v, "instance")?
        .get("schema")
        .and_then(Value::as_str)
        .ok_or_else(|| Failure::Usage("instance has no \"schema\" string".into()))
}

/// Nested arrays for a row-major array of the given shape.
pub fn nested(dims: &[usize], data: &[BigInt]) -> Value {
    match dims.split_first() {
        None => int(&data[0]),
        Some((&m, rest)) => {
            let stride: usize = rest.iter().product();
            Value::Array((0..m).map(|i| nested(rest, &data[i * stride..(i + 1) * stride])).collect())
        }
    }
}
