//! Layered configuration: defaults, then a config file, then flags.
//!
//! Every subcommand has a flat configuration struct. The layers are merged as
//! JSON objects keyed by field name, so a config file may set exactly the
//! keys a flag could. Keys may be written with dashes or underscores.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use sparse_movmf::{Error, Result};

fn normalize_key(key: &str) -> String {
    key.trim().replace('-', "_")
}

/// Reads `path` as a JSON object, or as `key = value` lines otherwise.
/// Values in the line format are read as JSON when they parse, as strings
/// when they do not.
pub fn read_config_file(path: &Path) -> Result<Map<String, Value>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<Map<String, Value>> {
    if text.trim_start().starts_with('{') {
        let parsed: Map<String, Value> = serde_json::from_str(text)
            .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        return Ok(parsed.into_iter().map(|(k, v)| (normalize_key(&k), v)).collect());
    }
    let mut out = Map::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse { line: lineno + 1, message: format!("expected key = value, found {line:?}") });
        };
        let value = value.trim();
        let parsed = serde_json::from_str(value).unwrap_or_else(|_| Value::String(value.to_string()));
        out.insert(normalize_key(key), parsed);
    }
    Ok(out)
}

/// Merges `file` and then `flags` over the defaults of `T`. Keys that `T`
/// does not have are rejected.
pub fn resolve<T, F>(file: Option<&Map<String, Value>>, flags: &F) -> Result<(T, Value)>
where
    T: Default + Serialize + DeserializeOwned,
    F: Serialize,
{
    let Value::Object(mut merged) = serde_json::to_value(T::default()).expect("config serialises") else {
        unreachable!("configs are structs");
    };
    let mut layers = Vec::new();
    if let Some(file) = file {
        layers.push(file.clone());
    }
    if let Value::Object(given) = serde_json::to_value(flags).expect("flags serialise") {
        layers.push(given);
    }
    for layer in layers {
        for (key, value) in layer {
            if !merged.contains_key(&key) {
                let mut known: Vec<&String> = merged.keys().collect();
                known.sort();
                return Err(Error::Config(format!("unknown configuration key {key:?}; known keys: {known:?}")));
            }
            merged.insert(key, value);
        }
    }
    let value = Value::Object(merged);
    let typed = serde_json::from_value(value.clone()).map_err(|e| Error::Config(e.to_string()))?;
    Ok((typed, value))
}

/// Hex SHA-256 of the compact JSON rendering (keys sorted).
pub fn config_hash(config: &Value) -> String {
    hex::encode(Sha256::digest(config.to_string().as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Default, Serialize, Deserialize, PartialEq)]
    #[serde(default)]
    struct Demo {
        k: usize,
        beta: f64,
        name: Option<String>,
    }

    #[derive(Serialize)]
    struct DemoFlags {
        #[serde(skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let file = parse_config_text("# comment\nk = 3\nbeta=0.5\nname = plain text\n").unwrap();
        let (d, _): (Demo, _) = resolve(Some(&file), &DemoFlags { k: Some(7) }).unwrap();
        assert_eq!(d, Demo { k: 7, beta: 0.5, name: Some("plain text".into()) });
        let (d, _): (Demo, _) = resolve(None, &DemoFlags { k: None }).unwrap();
        assert_eq!(d, Demo::default());
    }

    #[test]
    fn json_files_and_dashes() {
        let file = parse_config_text("{\"beta\": 2, \"k\": 1}").unwrap();
        let (d, _): (Demo, _) = resolve(Some(&file), &DemoFlags { k: None }).unwrap();
        assert_eq!((d.k, d.beta), (1, 2.0));
        assert_eq!(parse_config_text("max-steps = 4").unwrap()["max_steps"], 4);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let file = parse_config_text("bogus = 1").unwrap();
        let err = resolve::<Demo, _>(Some(&file), &DemoFlags { k: None }).unwrap_err();
        assert!(matches!(err, Error::Config(m) if m.contains("bogus")));
        assert!(parse_config_text("no equals sign").is_err());
    }

    #[test]
    fn hash_is_stable() {
        let a = config_hash(&serde_json::json!({"b": 1, "a": 2}));
        let b = config_hash(&serde_json::json!({"a": 2, "b": 1}));
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
    }
}
