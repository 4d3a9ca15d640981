//! Result documents: deterministic JSON (sorted keys, exact integers,
//! large values as strings) and aligned text tables.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::document::ComplexDocument;

/// Largest integer serialized as a JSON number; anything bigger becomes
/// a string so downstream consumers never lose exactness.
const MAX_JSON_INT: u64 = 1 << 53;

pub fn json_u128(v: u128) -> Value {
    if v <= MAX_JSON_INT as u128 {
        json!(v as u64)
    } else {
        json!(v.to_string())
    }
}

pub fn json_bigint(v: &BigInt) -> Value {
    match i64::try_from(v.clone()) {
        Ok(x) if x.unsigned_abs() <= MAX_JSON_INT => json!(x),
        _ => json!(v.to_string()),
    }
}

pub fn json_degree_table<V: Clone + Into<u128>>(table: &BTreeMap<usize, V>) -> Value {
    let mut map = Map::new();
    for (deg, dim) in table {
        map.insert(deg.to_string(), json_u128((*dim).clone().into()));
    }
    Value::Object(map)
}

/// The envelope around every command's payload.
pub struct Report {
    pub command: String,
    pub input: Value,
    pub result: Value,
    pub timing_ms: u128,
    /// extra human lines for the text renderer, one per row
    pub text_lines: Vec<String>,
}

impl Report {
    pub fn input_echo(doc: &ComplexDocument) -> anyhow::Result<Value> {
        let canon = doc.canonical()?;
        Ok(json!({
            "digest": doc.digest()?,
            "m": canon.m,
            "facets": canon.facets,
            "name": canon.name,
        }))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "input": self.input,
            "result": self.result,
            "timing_ms": self.timing_ms,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    pub fn render(&self, format: crate::Format) -> String {
        match format {
            crate::Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
                s.push('\n');
                s
            }
            crate::Format::Text => {
                let mut out = String::new();
                out.push_str(&format!("toric-calc {}\n", self.command));
                if let Some(name) = self.input.get("name").and_then(|n| n.as_str()) {
                    out.push_str(&format!("input: {name}\n"));
                }
                if let Some(digest) = self.input.get("digest").and_then(|d| d.as_str()) {
                    out.push_str(&format!("digest: {digest}\n"));
                }
                out.push('\n');
                for line in &self.text_lines {
                    out.push_str(line);
                    out.push('\n');
                }
                out.push_str(&format!("\nelapsed: {} ms\n", self.timing_ms));
                out
            }
        }
    }
}

/// Renders a `degree -> value` table with aligned columns.
pub fn text_table<V: std::fmt::Display>(
    title: &str,
    rows: impl Iterator<Item = (usize, V)>,
) -> Vec<String> {
    let mut lines = vec![title.to_string()];
    let body: Vec<(String, String)> = rows.map(|(d, v)| (d.to_string(), v.to_string())).collect();
    let width = body
        .iter()
        .map(|(d, _)| d.len())
        .max()
        .unwrap_or(1)
        .max("deg".len());
    lines.push(format!("  {:>width$}  value", "deg"));
    for (d, v) in body {
        lines.push(format!("  {d:>width$}  {v}"));
    }
    lines
}
