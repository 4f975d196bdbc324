use anyhow::{Context, Result};
use genus_cantor::sequences::FoldingSequence;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::fs;
use std::path::{Path, PathBuf};

pub const SCHEMA: u32 = 1;

/// Rounds every float to 12 significant digits so output bytes do not depend
/// on the last bits of a parallel sum.
pub fn fixed(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
            serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(fixed).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, fixed(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

/// `{"schema": 1, ...body}` with the sub-threshold label, as pretty JSON.
pub fn document<T: Serialize>(seq: &FoldingSequence, body: &T) -> Result<String> {
    let mut top = Map::new();
    top.insert("schema".into(), json!(SCHEMA));
    top.insert("mode".into(), json!(if seq.is_admissible() { "admissible" } else { "figure" }));
    top.insert("mode_note".into(), json!(mode_note(seq)));
    match serde_json::to_value(body)? {
        Value::Object(o) => top.extend(o),
        other => {
            top.insert("data".into(), other);
        }
    }
    Ok(serde_json::to_string_pretty(&fixed(Value::Object(top)))? + "\n")
}

pub fn mode_note(seq: &FoldingSequence) -> String {
    if seq.is_admissible() {
        format!("N = {} is admissible for genus {}", seq.n, seq.g)
    } else {
        let ng = FoldingSequence::new(seq.g).map(|s| s.n).unwrap_or(0);
        format!(
            "FIGURE MODE: N = {} is below the admissible density N_g = {ng} for genus {}; quantitative bounds are not expected to hold",
            seq.n, seq.g
        )
    }
}

pub fn file_name(what: &str, g: usize, n: u64, depth: usize, ext: &str) -> String {
    format!("{what}_g{g}_N{n}_d{depth}.{ext}")
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
