use std::io::Write;

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use crate::{Cli, Format};

/// Provenance block shared by every report: tool version, the flags as
/// given, and the damping parameters exactly as typed.
pub fn provenance(command: &str, args: &[String], gamma_literals: &[String]) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("tool".into(), json!("adlp"));
    map.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    map.insert("command".into(), json!(command));
    map.insert("args".into(), json!(args));
    map.insert("gammaLiterals".into(), json!(gamma_literals));
    map
}

/// Splits a comma-separated γ list, keeping each literal next to its value.
pub fn parse_gammas(list: &str) -> Result<(Vec<String>, Vec<f64>)> {
    let literals: Vec<String> = list.split(',').map(|s| s.trim().to_owned()).collect();
    if literals.iter().any(String::is_empty) {
        anyhow::bail!("empty entry in damping parameter list {list:?}");
    }
    let values = literals
        .iter()
        .map(|s| s.parse::<f64>().with_context(|| format!("damping parameter {s:?} is not a number")))
        .collect::<Result<_>>()?;
    Ok((literals, values))
}

/// Shortest decimal that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn require_format(cli: &Cli, allowed: &[Format]) -> Result<()> {
    if !allowed.contains(&cli.format) {
        anyhow::bail!("format {:?} is not available for this command (CSV only covers enumerator tables)", cli.format);
    }
    Ok(())
}

pub fn emit(cli: &Cli, text: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        stdout.write_all(b"\n")?;
    }
    if let Some(path) = &cli.out {
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

pub fn json_text(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize")
}
