//! JSON Lines datasets: one value per line, shaped like the order tree.
//!
//! | node | JSON |
//! |---|---|
//! | finite | integer symbol (or `true`/`false` for two symbols) |
//! | unsigned / signed integer | number or decimal string |
//! | float | number, or a string such as `"-inf"` or `"NaN"` |
//! | bool | `true` / `false` |
//! | bytes | string (its UTF-8 bytes), `{"hex": "…"}` or an array of symbols |
//! | rational | `{"num": …, "den": …}`, `"p/q"` or an integer |
//! | sequence | array; strings and `{"hex"}` too when the items are bytes |
//! | sum | `[master_symbol, case_value]` |

use serde_json::{json, Map, Number, Value};
use thiserror::Error;

use crate::model::{
    byte_item_order, check_element, Builtin, ElementError, ElementValue, OrderNode, Primitive,
    Rational,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DatasetError {
    #[error("line {line}: invalid JSON: {message}")]
    Json { line: usize, message: String },
    #[error("line {line}: {message}")]
    Shape { line: usize, message: String },
    #[error("line {line}: element does not match the order at {}: {}", .source.path, .source.reason)]
    Mismatch {
        line: usize,
        #[source]
        source: ElementError,
    },
}

impl DatasetError {
    pub fn line(&self) -> usize {
        match self {
            DatasetError::Json { line, .. }
            | DatasetError::Shape { line, .. }
            | DatasetError::Mismatch { line, .. } => *line,
        }
    }
}

/// A non-blank line of a dataset; `line` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawRecord<'a> {
    pub line: usize,
    pub text: &'a str,
}

/// The non-blank lines of `text`, in order.
pub fn records(text: &str) -> impl Iterator<Item = RawRecord<'_>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, text)| RawRecord { line: i + 1, text })
}

/// Parses one record and checks it against `tree`.
pub fn parse_record(
    tree: &OrderNode,
    text: &str,
    line: usize,
) -> Result<ElementValue, DatasetError> {
    let json: Value = serde_json::from_str(text).map_err(|e| DatasetError::Json {
        line,
        message: e.to_string(),
    })?;
    let value =
        value_from_json(tree, &json).map_err(|message| DatasetError::Shape { line, message })?;
    check_element(tree, &value).map_err(|source| DatasetError::Mismatch { line, source })?;
    Ok(value)
}

/// Converts JSON to an element of `tree`'s shape. Ranges are left to
/// [`check_element`].
pub fn value_from_json(tree: &OrderNode, json: &Value) -> Result<ElementValue, String> {
    match tree {
        OrderNode::Finite(order) => match json {
            Value::Bool(b) if order.cardinality == 2 => Ok(ElementValue::Rank(u64::from(*b))),
            _ => Ok(ElementValue::Rank(unsigned(json)?)),
        },
        OrderNode::Builtin(kind) => builtin_from_json(kind, json),
        OrderNode::Inv(child) => value_from_json(child, json),
        OrderNode::Seq(seq) => match json {
            Value::Array(items) => {
                let values = items
                    .iter()
                    .enumerate()
                    .map(|(i, item)| {
                        let order = seq.item_order_at(i as u64).map_err(|e| e.to_string())?;
                        value_from_json(order, item).map_err(|e| format!("item {i}: {e}"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(ElementValue::Sequence(values))
            }
            Value::String(_) | Value::Object(_)
                if seq
                    .prelude
                    .iter()
                    .chain(&seq.period)
                    .all(|n| byte_item_order(n).is_some()) =>
            {
                Ok(ElementValue::bytes(bytes_from_json(json)?))
            }
            other => Err(format!("expected an array, found {}", describe(other))),
        },
        OrderNode::Sum(sum) => {
            let Value::Array(pair) = json else {
                return Err(format!(
                    "expected [master, value], found {}",
                    describe(json)
                ));
            };
            let [master, sub] = pair.as_slice() else {
                return Err(format!(
                    "expected [master, value], found {} elements",
                    pair.len()
                ));
            };
            let master = unsigned(master)?;
            let case = sum
                .cases
                .get(master as usize)
                .filter(|_| master < sum.master.cardinality)
                .ok_or_else(|| format!("master symbol {master} out of range"))?;
            Ok(ElementValue::sum(master, value_from_json(case, sub)?))
        }
    }
}

fn builtin_from_json(kind: &Builtin, json: &Value) -> Result<ElementValue, String> {
    let primitive = match kind {
        Builtin::UInt8 | Builtin::UInt16 | Builtin::UInt32 | Builtin::UInt64 => {
            Primitive::Unsigned(unsigned(json)?)
        }
        Builtin::Int8 | Builtin::Int16 | Builtin::Int32 | Builtin::Int64 => {
            Primitive::Signed(signed(json)?)
        }
        Builtin::Float32 => Primitive::F32(match json {
            // Direct parse avoids rounding twice.
            Value::String(s) => s
                .trim()
                .parse()
                .map_err(|_| format!("expected a number, found {s:?}"))?,
            _ => float(json)? as f32,
        }),
        Builtin::Float64 => Primitive::F64(float(json)?),
        Builtin::Bool => match json {
            Value::Bool(b) => Primitive::Bool(*b),
            other => return Err(format!("expected true or false, found {}", describe(other))),
        },
        Builtin::Bytes(_) => match json {
            Value::Array(items) => {
                let ranks = items.iter().map(|v| unsigned(v).map(ElementValue::Rank));
                return ranks
                    .collect::<Result<Vec<_>, _>>()
                    .map(ElementValue::Sequence);
            }
            other => Primitive::Bytes(bytes_from_json(other)?),
        },
        Builtin::Rational => Primitive::Rational(rational(json)?),
    };
    Ok(ElementValue::Primitive(primitive))
}

fn describe(json: &Value) -> &'static str {
    match json {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn unsigned(json: &Value) -> Result<u64, String> {
    match json {
        Value::Number(n) => n
            .as_u64()
            .ok_or_else(|| format!("expected an unsigned integer, found {n}")),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("expected an unsigned integer, found {s:?}")),
        other => Err(format!(
            "expected an unsigned integer, found {}",
            describe(other)
        )),
    }
}

fn signed(json: &Value) -> Result<i64, String> {
    match json {
        Value::Number(n) => n
            .as_i64()
            .ok_or_else(|| format!("expected a signed integer, found {n}")),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("expected a signed integer, found {s:?}")),
        other => Err(format!(
            "expected a signed integer, found {}",
            describe(other)
        )),
    }
}

fn float(json: &Value) -> Result<f64, String> {
    match json {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| format!("expected a number, found {n}")),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("expected a number, found {s:?}")),
        other => Err(format!("expected a number, found {}", describe(other))),
    }
}

fn bytes_from_json(json: &Value) -> Result<Vec<u8>, String> {
    match json {
        Value::String(s) => Ok(s.as_bytes().to_vec()),
        Value::Object(map) => match (map.len(), map.get("hex")) {
            (1, Some(Value::String(h))) => {
                hex::decode(h).map_err(|e| format!("bad hex string: {e}"))
            }
            _ => Err("expected {\"hex\": \"…\"}".into()),
        },
        other => Err(format!("expected a string, found {}", describe(other))),
    }
}

fn rational(json: &Value) -> Result<Rational, String> {
    let (num, den) = match json {
        Value::Object(map) => {
            let field = |name| {
                map.get(name)
                    .ok_or_else(|| format!("rational needs {name:?}"))
            };
            if map.len() != 2 {
                return Err("rational takes exactly \"num\" and \"den\"".into());
            }
            (signed(field("num")?)?, unsigned(field("den")?)?)
        }
        Value::String(s) => match s.split_once('/') {
            Some((p, q)) => (
                p.trim()
                    .parse()
                    .map_err(|_| format!("bad numerator in {s:?}"))?,
                q.trim()
                    .parse()
                    .map_err(|_| format!("bad denominator in {s:?}"))?,
            ),
            None => (signed(json)?, 1),
        },
        Value::Number(_) => (signed(json)?, 1),
        other => return Err(format!("expected a rational, found {}", describe(other))),
    };
    Ok(Rational { num, den })
}

/// Inverse of [`value_from_json`]: integers beyond 2^53 and non-finite floats
/// are written as strings, byte strings that are not UTF-8 as `{"hex"}`.
pub fn value_to_json(value: &ElementValue) -> Value {
    const EXACT: u64 = 1 << 53;
    match value {
        ElementValue::Rank(r) => json!(r),
        ElementValue::Primitive(p) => match p {
            Primitive::Unsigned(v) if *v <= EXACT => json!(v),
            Primitive::Unsigned(v) => json!(v.to_string()),
            Primitive::Signed(v) if v.unsigned_abs() <= EXACT => json!(v),
            Primitive::Signed(v) => json!(v.to_string()),
            Primitive::F32(v) => float_to_json(f64::from(*v)),
            Primitive::F64(v) => float_to_json(*v),
            Primitive::Bool(b) => json!(b),
            Primitive::Bytes(bytes) => match std::str::from_utf8(bytes) {
                Ok(s) => json!(s),
                Err(_) => json!({ "hex": hex::encode(bytes) }),
            },
            Primitive::Rational(r) => {
                let mut map = Map::new();
                map.insert(
                    "num".into(),
                    value_to_json(&ElementValue::Primitive(Primitive::Signed(r.num))),
                );
                map.insert(
                    "den".into(),
                    value_to_json(&ElementValue::Primitive(Primitive::Unsigned(r.den))),
                );
                Value::Object(map)
            }
        },
        ElementValue::Sequence(items) => Value::Array(items.iter().map(value_to_json).collect()),
        ElementValue::SumPair(master, sub) => json!([master, value_to_json(sub)]),
    }
}

fn float_to_json(v: f64) -> Value {
    match Number::from_f64(v) {
        Some(n) => Value::Number(n),
        None => json!(v.to_string()),
    }
}
