//! Table output: the JSON value flattened to `path  value` lines, so both
//! formats carry the same numbers.

use serde_json::Value;

fn leaf(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) => {
            if let Some(cells) = items.iter().map(leaf).collect::<Option<Vec<_>>>() {
                out.push((prefix.to_string(), cells.join(", ")));
            } else {
                for (i, x) in items.iter().enumerate() {
                    flatten(&format!("{prefix}[{i}]"), x, out);
                }
            }
        }
        _ => out.push((prefix.to_string(), leaf(v).expect("scalar JSON value"))),
    }
}

pub fn table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, x)| format!("{k:<width$}  {x}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattens_nested_values() {
        let v = json!({"level": 1, "components": [{"coeffs": ["1"]}, {"coeffs": ["0", "1"]}], "ok": true});
        let t = table(&v);
        assert!(t.contains("components[1].coeffs  0, 1\n"));
        assert!(t.contains("level                 1\n"));
        assert!(t.contains("ok                    true\n"));
    }
}
