use serde_json::Value;

use crate::Format;

/// A command's JSON record and whether every requested check passed.
pub struct Outcome {
    pub record: Value,
    pub ok: bool,
}

pub fn render(record: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(record).expect("JSON values serialize"),
        Format::Text => {
            let mut out = String::new();
            text(record, 0, &mut out);
            out.trim_end().to_string()
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => Some(
            items
                .iter()
                .map(|i| scalar(i).expect("scalar item"))
                .collect::<Vec<_>>()
                .join(", "),
        ),
        _ => None,
    }
}

/// Indented `key: value` lines; nested records are indented below their key.
fn text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(item, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}[{i}] {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        text(item, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).expect("scalar"))),
    }
}
