//! Merges a flat JSON config file into the command line.
//!
//! Every key becomes a `--key value` pair placed before the user's own
//! arguments, so flags given on the command line win. The key `experiment`
//! selects the subcommand when none is given.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use serde_json::{Map, Value};

use crate::args::SUBCOMMANDS;

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn value_to_arg(key: &str, v: &Value) -> Result<String, String> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        Value::Array(items) => items
            .iter()
            .map(|i| match i {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(format!("config key '{key}': unsupported list element {i}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|parts| parts.join(",")),
        _ => Err(format!("config key '{key}': unsupported value {v}")),
    }
}

fn load(path: &Path) -> Result<Map<String, Value>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(format!("config {} must be a JSON object", path.display())),
        Err(e) => Err(format!("config {} is not valid JSON: {e}", path.display())),
    }
}

/// Returns the argument vector with the config file (if any) folded in.
pub fn merge(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let map = load(Path::new(&path))?;

    let mut rest: Vec<OsString> = args.into_iter().collect();
    let program = if rest.is_empty() { OsString::from("sfq") } else { rest.remove(0) };
    let user_cmd = rest
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()));
    let command = match (user_cmd, map.get("experiment")) {
        (Some(i), _) => rest.remove(i),
        (None, Some(Value::String(e))) if SUBCOMMANDS.contains(&e.as_str()) => e.into(),
        (None, Some(e)) => return Err(format!("config key 'experiment': unknown experiment {e}")),
        (None, None) => return Err("no experiment given on the command line or in config key 'experiment'".into()),
    };

    let mut merged = vec![program, command];
    for (key, v) in &map {
        if key == "experiment" || key == "config" {
            continue;
        }
        match v {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => merged.push(format!("--{key}").into()),
            _ => {
                merged.push(format!("--{key}").into());
                merged.push(value_to_arg(key, v)?.into());
            }
        }
    }
    merged.extend(rest);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn no_config_is_passthrough() {
        let a = os(&["sfq", "gate3", "--n", "5"]);
        assert_eq!(merge(a.clone()).unwrap(), a);
    }

    #[test]
    fn file_values_precede_flags() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, r#"{{"experiment": "gate3", "n": 50, "theta": "pi", "format": ["csv"]}}"#).unwrap();
        let path = f.path().to_string_lossy().to_string();
        let merged = merge(os(&["sfq", "--config", &path, "--n", "7"])).unwrap();
        let merged: Vec<String> = merged.iter().map(|s| s.to_string_lossy().into()).collect();
        assert_eq!(merged[1], "gate3");
        let file_n = merged.iter().position(|s| s == "50").unwrap();
        let flag_n = merged.iter().position(|s| s == "7").unwrap();
        assert!(file_n < flag_n);
        assert!(merged.contains(&"csv".to_string()));
    }

    #[test]
    fn bad_experiment_is_named() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, r#"{{"experiment": "warp"}}"#).unwrap();
        let path = f.path().to_string_lossy().to_string();
        let err = merge(os(&["sfq", "--config", &path])).unwrap_err();
        assert!(err.contains("experiment"));
    }
}
