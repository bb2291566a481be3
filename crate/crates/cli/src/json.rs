//! Canonical JSON: keys sorted (the default `Map` is ordered), floats printed
//! with 17 significant digits, rationals as `"p/q"` strings.

use std::str::FromStr;

use fkdv_core::arith::{format_rational, Rational};
use fkdv_core::params::RationalParams;
use serde_json::{json, Map, Number, Value};

pub const SCHEMA: u64 = 1;

/// Seventeen significant digits, or `null` for non-finite values.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Number::from_str(&format_float(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// `d.dddddddddddddddde±x`, the exponent always signed.
pub fn format_float(x: f64) -> String {
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => s,
    }
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(float).collect())
}

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn params(p: &RationalParams) -> Value {
    json!({
        "label": p.label(),
        "alpha": rational(&p.alpha),
        "beta": rational(&p.beta),
        "gamma": rational(&p.gamma),
        "omega": rational(&p.omega),
    })
}

/// Top-level document with the schema version and command name.
pub fn document(command: &str, body: Value) -> Value {
    let mut map = match body {
        Value::Object(m) => m,
        other => Map::from_iter([("result".to_string(), other)]),
    };
    map.insert("schema".into(), json!(SCHEMA));
    map.insert("command".into(), json!(command));
    Value::Object(map)
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serialisable");
    s.push('\n');
    s
}
