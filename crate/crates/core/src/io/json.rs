//! Structured JSON codec mirroring the data model: functions carry a list of
//! `{monomial, num, den}` entries, operators a per-power list of such entries,
//! constants a list of `{monomial, value}` entries, all with the explicit
//! context `oddConsts`. Scalar strings use the canonical text grammar.

use super::parse::parse_function;
use super::print::{rat_str, superfn_str};
use super::IoError;
use crate::funcring::{GrassmannMono, OddContext, ScalarFrac, SuperConst, SuperFn};
use crate::superop::SuperOp;
use serde_json::{json, Value};

fn mono_key(m: GrassmannMono) -> String {
    m.to_string()
}

fn entry_json(m: GrassmannMono, c: &ScalarFrac) -> Value {
    json!({
        "monomial": mono_key(m),
        "num": c.num().to_string(),
        "den": c.den().to_string(),
    })
}

pub fn fn_to_json(f: &SuperFn) -> Value {
    json!({
        "kind": "function",
        "oddConsts": f.ctx().n,
        "entries": f.entries().map(|(m, c)| entry_json(*m, c)).collect::<Vec<_>>(),
        "text": superfn_str(f),
    })
}

pub fn op_to_json(op: &SuperOp) -> Value {
    let coeffs: Vec<Value> = (0..op.coeffs().len())
        .map(|k| {
            let a = op.coeff(k);
            Value::Array(a.entries().map(|(m, c)| entry_json(*m, c)).collect())
        })
        .collect();
    json!({
        "kind": "operator",
        "oddConsts": op.ctx().n,
        "order": op.deg().map(|d| d as i64).unwrap_or(-1),
        "coeffs": coeffs,
        "text": op.to_string(),
    })
}

pub fn const_to_json(c: &SuperConst) -> Value {
    json!({
        "kind": "constant",
        "oddConsts": c.ctx().n,
        "entries": c
            .entries()
            .map(|(m, v)| json!({"monomial": mono_key(*m), "value": rat_str(v)}))
            .collect::<Vec<_>>(),
        "text": c.to_string(),
    })
}

fn bad(msg: &str) -> IoError {
    IoError::Json {
        message: msg.to_string(),
    }
}

fn ctx_of(v: &Value) -> Result<OddContext, IoError> {
    let n = v
        .get("oddConsts")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing oddConsts"))?;
    Ok(OddContext::new(n as usize))
}

fn mono_from_str(s: &str, ctx: OddContext) -> Result<GrassmannMono, IoError> {
    let f = parse_function(s, ctx)?;
    let mut entries = f.entries();
    match (entries.next(), entries.next()) {
        (Some((m, c)), None) if c.is_one() => Ok(*m),
        _ => Err(bad(&format!("'{}' is not a Grassmann monomial", s))),
    }
}

fn scalar_from_str(s: &str, ctx: OddContext) -> Result<crate::funcring::ScalarFn, IoError> {
    let f = parse_function(s, ctx)?;
    let mut entries = f.entries();
    match (entries.next(), entries.next()) {
        (None, _) => Ok(crate::funcring::ScalarFn::zero()),
        (Some((m, c)), None) if m.is_empty() && c.den().is_one() => Ok(c.num().clone()),
        _ => Err(bad(&format!("'{}' is not a scalar function", s))),
    }
}

fn entries_from_json(v: &Value, ctx: OddContext) -> Result<SuperFn, IoError> {
    let arr = v.as_array().ok_or_else(|| bad("entries must be an array"))?;
    let mut out = Vec::with_capacity(arr.len());
    for e in arr {
        let mono = e
            .get("monomial")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("entry missing monomial"))?;
        let num = e
            .get("num")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("entry missing num"))?;
        let den = e
            .get("den")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("entry missing den"))?;
        let mono = mono_from_str(mono, ctx)?;
        let num = scalar_from_str(num, ctx)?;
        let den = scalar_from_str(den, ctx)?;
        let frac = ScalarFrac::new(num, den).map_err(|e| bad(&e.to_string()))?;
        out.push((mono, frac));
    }
    SuperFn::from_entries(ctx, out).map_err(|e| bad(&e.to_string()))
}

pub fn fn_from_json(v: &Value) -> Result<SuperFn, IoError> {
    if v.get("kind").and_then(Value::as_str) != Some("function") {
        return Err(bad("expected kind: function"));
    }
    let ctx = ctx_of(v)?;
    entries_from_json(v.get("entries").ok_or_else(|| bad("missing entries"))?, ctx)
}

pub fn op_from_json(v: &Value) -> Result<SuperOp, IoError> {
    if v.get("kind").and_then(Value::as_str) != Some("operator") {
        return Err(bad("expected kind: operator"));
    }
    let ctx = ctx_of(v)?;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing coeffs"))?;
    let mut fns = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        fns.push(entries_from_json(c, ctx)?);
    }
    SuperOp::from_coeffs(ctx, fns).map_err(|e| bad(&e.to_string()))
}

pub fn value_from_json(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| bad(&e.to_string()))
}
