//! JSON input and output helpers: exact rationals travel as `"p/q"`
//! strings, parameter sets as arrays of them, and Bethe indices as
//! `{"levels": [[...], ...]}` objects.

use anyhow::{anyhow, bail, Context, Result};
use bethe_core::exactmath::parse_rat;
use bethe_core::{BetheIndex, ParamSet, Rat};
use serde_json::Value;

/// Parses a kernel constant or other single rational from flag text.
pub fn rat_arg(text: &str) -> Result<Rat> {
    parse_rat(text).map_err(|e| anyhow!("{e}"))
}

/// Parses a JSON array of `"p/q"` strings into a parameter set.
pub fn param_set(text: &str) -> Result<ParamSet<Rat>> {
    let value: Value = serde_json::from_str(text).context("parameter set is not valid JSON")?;
    set_from_value(&value)
}

fn set_from_value(value: &Value) -> Result<ParamSet<Rat>> {
    let arr = value
        .as_array()
        .ok_or_else(|| anyhow!("expected a JSON array of rational strings"))?;
    let mut vals = Vec::with_capacity(arr.len());
    for entry in arr {
        let s = entry
            .as_str()
            .ok_or_else(|| anyhow!("expected rational strings, found {entry}"))?;
        vals.push(parse_rat(s).map_err(|e| anyhow!("{e}"))?);
    }
    ParamSet::new(vals).map_err(|e| anyhow!("{e}"))
}

/// Parses a Bethe index from either `[[...], ...]` or
/// `{"levels": [[...], ...]}`.
pub fn bethe_index(text: &str) -> Result<BetheIndex<Rat>> {
    let value: Value = serde_json::from_str(text).context("index is not valid JSON")?;
    let levels_value = match &value {
        Value::Object(map) => map
            .get("levels")
            .ok_or_else(|| anyhow!("index object needs a \"levels\" field"))?,
        other => other,
    };
    let arr = levels_value
        .as_array()
        .ok_or_else(|| anyhow!("levels must be a JSON array of arrays"))?;
    let mut levels = Vec::with_capacity(arr.len());
    for level in arr {
        levels.push(set_from_value(level)?);
    }
    if levels.is_empty() {
        bail!("index needs at least one level");
    }
    Ok(BetheIndex::new(levels))
}

/// Parses a comma-separated rational list, as used by repeated-value flags.
pub fn rat_list(text: &str) -> Result<Vec<Rat>> {
    let value: Value = serde_json::from_str(text).context("list is not valid JSON")?;
    let arr = value
        .as_array()
        .ok_or_else(|| anyhow!("expected a JSON array of rational strings"))?;
    arr.iter()
        .map(|entry| {
            let s = entry
                .as_str()
                .ok_or_else(|| anyhow!("expected rational strings, found {entry}"))?;
            parse_rat(s).map_err(|e| anyhow!("{e}"))
        })
        .collect()
}

/// Parses `m,n` into an algebra shape.
pub fn algebra_arg(text: &str) -> Result<(usize, usize)> {
    let (m, n) = text
        .split_once(',')
        .ok_or_else(|| anyhow!("expected m,n"))?;
    Ok((
        m.trim().parse().context("bad m")?,
        n.trim().parse().context("bad n")?,
    ))
}

/// Renders a rational as a JSON string value.
pub fn rat_value(r: &Rat) -> Value {
    Value::String(r.to_string())
}

/// Renders a parameter set as a JSON array of strings.
pub fn set_value(s: &ParamSet<Rat>) -> Value {
    Value::Array(s.values().iter().map(rat_value).collect())
}

/// Renders a Bethe index as `{"levels": [[...], ...]}`.
pub fn index_value(index: &BetheIndex<Rat>) -> Value {
    let levels: Vec<Value> = index.levels().iter().map(set_value).collect();
    serde_json::json!({ "levels": levels })
}

/// Serializes a JSON value compactly, or pretty with the given indent.
pub fn render(value: &Value, indent: Option<usize>) -> Result<String> {
    match indent {
        None => Ok(serde_json::to_string(value)?),
        Some(width) => {
            let pad = " ".repeat(width.max(1));
            let formatter = serde_json::ser::PrettyFormatter::with_indent(pad.as_bytes());
            let mut out = Vec::new();
            let mut ser = serde_json::Serializer::with_formatter(&mut out, formatter);
            serde::Serialize::serialize(value, &mut ser)?;
            Ok(String::from_utf8(out)?)
        }
    }
}
