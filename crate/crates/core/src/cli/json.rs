//! Pretty JSON with short numeric arrays kept on one line.
//!
//! A matrix prints one row per line (`[[re, im], [re, im]]`) instead of one
//! number per line, which keeps scenarios and reports readable and diffable.

use serde_json::Value;

/// Depth of nested arrays, 0 for a scalar, `usize::MAX` if an object is inside.
fn array_depth(v: &Value) -> usize {
    match v {
        Value::Array(items) => items.iter().map(array_depth).max().map_or(1, |d| d.saturating_add(1)),
        Value::Object(_) => usize::MAX,
        _ => 0,
    }
}

fn scalar(v: &Value) -> String {
    serde_json::to_string(v).expect("scalar serializes")
}

fn write(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if array_depth(v) <= 2 => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write(item, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&scalar(&Value::String(key.clone())));
                out.push_str(": ");
                write(item, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => out.push_str(&scalar(v)),
    }
}

/// Serializes with a trailing newline.
pub fn to_pretty(value: &impl serde::Serialize) -> String {
    let v = serde_json::to_value(value).expect("value serializes");
    let mut out = String::new();
    write(&v, 0, &mut out);
    out.push('\n');
    out
}
