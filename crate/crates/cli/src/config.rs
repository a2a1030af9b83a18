//! JSON run configurations.
//!
//! A config names one command and carries the same parameters the flags
//! would, with snake_case keys:
//!
//! ```json
//! {"command": "experiment", "experiment": "figure1", "n_list": [3, 5]}
//! {"command": "bounds", "theorem": "dft_frequency", "m": [16], "ell": 0.1}
//! {"command": "classify", "deltas": [0, "1/2"], "p": [0, 1]}
//! ```
//!
//! `seed` defaults to 0 and `format` to json. `out` sets the output path.

use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::Format;

pub const COMMANDS: [&str; 6] = ["build", "spectral", "bounds", "classify", "verify", "experiment"];

/// Commands that take a `--seed` flag.
const SEEDED: [&str; 4] = ["build", "verify", "experiment", "spectral"];

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub command: String,
    pub seed: u64,
    /// True when the file set `seed` itself.
    pub seed_given: bool,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Command-specific parameters, everything not listed above.
    pub params: Map<String, Value>,
}

/// A config that does not fit the schema; `field` names the culprit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config field \"{}\": {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn bad(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.into(),
        message: message.into(),
    }
}

pub fn load_config(path: &Path) -> Result<CliConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad("path", format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<CliConfig, ConfigError> {
    let value: Value = serde_json::from_str(text).map_err(|e| bad("json", e.to_string()))?;
    let Value::Object(mut map) = value else {
        return Err(bad("json", "top level must be an object"));
    };
    let command = match map.remove("command") {
        Some(Value::String(c)) if COMMANDS.contains(&c.as_str()) => c,
        Some(Value::String(c)) => {
            return Err(bad("command", format!("unknown command {c:?}, expected one of {COMMANDS:?}")))
        }
        Some(_) => return Err(bad("command", "must be a string")),
        None => return Err(bad("command", "missing")),
    };
    let seed_value = map.remove("seed");
    let seed_given = seed_value.is_some();
    let seed = match seed_value {
        None => 0,
        Some(v) => v.as_u64().ok_or_else(|| bad("seed", "must be a non-negative integer"))?,
    };
    let format = match map.remove("format") {
        None => Format::Json,
        Some(Value::String(f)) if f == "json" => Format::Json,
        Some(Value::String(f)) if f == "csv" => Format::Csv,
        Some(_) => return Err(bad("format", "must be \"json\" or \"csv\"")),
    };
    let out = match map.remove("out") {
        None | Some(Value::Null) => None,
        Some(Value::String(p)) => Some(PathBuf::from(p)),
        Some(_) => return Err(bad("out", "must be a path string")),
    };
    if seed_given && !SEEDED.contains(&command.as_str()) {
        return Err(bad("seed", format!("command {command} takes no seed")));
    }
    Ok(CliConfig {
        command,
        seed,
        seed_given,
        format,
        out,
        params: map,
    })
}

fn flag_value(field: &str, v: &Value) -> Result<String, ConfigError> {
    let scalar = |v: &Value| match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        _ => Err(bad(field, "expected numbers or strings")),
    };
    match v {
        Value::Array(items) if items.iter().any(Value::is_array) => {
            let rows = items
                .iter()
                .map(|row| match row {
                    Value::Array(comps) => comps.iter().map(scalar).collect::<Result<Vec<_>, _>>().map(|c| c.join(",")),
                    _ => Err(bad(field, "mixed nesting in list")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(rows.join(";"))
        }
        Value::Array(items) => Ok(items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?.join(",")),
        other => scalar(other),
    }
}

fn flag_name(key: &str) -> String {
    match key {
        "L" | "N" => key.to_string(),
        _ => key.replace('_', "-"),
    }
}

impl CliConfig {
    /// The equivalent command line, program name included. Not used for
    /// `experiment`, whose parameters go straight to the sweep request.
    pub fn to_argv(&self) -> Result<Vec<String>, ConfigError> {
        let mut argv = vec!["fourstab".to_string(), self.command.clone()];
        for (key, value) in &self.params {
            match value {
                Value::Bool(true) => argv.push(format!("--{}", flag_name(key))),
                Value::Bool(false) | Value::Null => {}
                v => {
                    argv.push(format!("--{}", flag_name(key)));
                    argv.push(flag_value(key, v)?);
                }
            }
        }
        if self.seed_given {
            argv.push("--seed".into());
            argv.push(self.seed.to_string());
        }
        argv.push("--format".into());
        argv.push(self.format.as_str().into());
        if let Some(out) = &self.out {
            argv.push("--out".into());
            argv.push(out.display().to_string());
        }
        Ok(argv)
    }
}
