//! Flat key-value configuration: a TOML table of scalars and number lists, plus
//! `key=value` overrides from the command line.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use thiserror::Error;
use toml::Value;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed configuration: {0}")]
    Parse(String),
    #[error("unknown experiment `{name}`; valid names: {valid}")]
    UnknownExperiment { name: String, valid: String },
    #[error("missing key `experiment`")]
    MissingExperiment,
    #[error("key `{key}` is not a parameter of {experiment}; valid keys: {valid}")]
    UnknownKey { key: String, experiment: &'static str, valid: String },
    #[error("key `{key}` expects {expected}, got `{got}`")]
    WrongType { key: String, expected: &'static str, got: String },
    #[error("override `{0}` is not of the form key=value")]
    BadOverride(String),
}

/// Value type of a configuration key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Float,
    Int,
    Text,
    FloatList,
    Bool,
}

impl Kind {
    fn describe(self) -> &'static str {
        match self {
            Kind::Float => "a number",
            Kind::Int => "a non-negative integer",
            Kind::Text => "a string",
            Kind::FloatList => "a list of numbers",
            Kind::Bool => "true or false",
        }
    }
}

/// Default of a key; `Derived` defaults are computed from other keys or from the estimate menu.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Default {
    Float(f64),
    Int(u64),
    Text(&'static str),
    Floats(&'static [f64]),
    Bool(bool),
    Derived(&'static str),
}

impl fmt::Display for Default {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Default::Float(v) => write!(f, "{v}"),
            Default::Int(v) => write!(f, "{v}"),
            Default::Text(v) => write!(f, "\"{v}\""),
            Default::Floats(v) => {
                let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", items.join(", "))
            }
            Default::Bool(v) => write!(f, "{v}"),
            Default::Derived(how) => write!(f, "({how})"),
        }
    }
}

/// One documented configuration key.
#[derive(Clone, Copy, Debug)]
pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Default,
    pub doc: &'static str,
}

pub const fn key(name: &'static str, kind: Kind, default: Default, doc: &'static str) -> KeySpec {
    KeySpec { name, kind, default, doc }
}

/// Keys accepted by every experiment.
pub const COMMON_KEYS: &[KeySpec] = &[
    key("experiment", Kind::Text, Default::Derived("required"), "experiment name"),
    key("seed", Kind::Int, Default::Int(1), "seed of the random data factory"),
    key("output", Kind::Text, Default::Text("dlab-out"), "output directory for CSV files and the manifest"),
];

/// A parsed configuration: the experiment name and every key after overrides.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub values: BTreeMap<String, Value>,
}

fn parse_value(text: &str) -> Value {
    match format!("v = {text}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(text.to_string())),
        Err(_) => Value::String(text.to_string()),
    }
}

impl ExperimentConfig {
    /// Parse TOML text and apply `key=value` overrides in order.
    pub fn from_text(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        let mut values: BTreeMap<String, Value> = table.into_iter().collect();
        for o in overrides {
            let (k, v) = o.split_once('=').ok_or_else(|| ConfigError::BadOverride(o.clone()))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(ConfigError::BadOverride(o.clone()));
            }
            values.insert(k.to_string(), parse_value(v.trim()));
        }
        let experiment = match values.get("experiment") {
            Some(Value::String(s)) => s.clone(),
            Some(other) => {
                return Err(ConfigError::WrongType {
                    key: "experiment".into(),
                    expected: Kind::Text.describe(),
                    got: other.to_string(),
                })
            }
            None => return Err(ConfigError::MissingExperiment),
        };
        Ok(Self { experiment, values })
    }

    pub fn from_file(path: &std::path::Path, overrides: &[String]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_text(&text, overrides)
    }

    /// Check every key against `keys` (plus the common ones) for name and type.
    pub fn check_keys(&self, experiment: &'static str, keys: &[KeySpec]) -> Result<(), ConfigError> {
        for (k, v) in &self.values {
            let spec = COMMON_KEYS.iter().chain(keys).find(|s| s.name == k).ok_or_else(|| {
                let valid: Vec<&str> = COMMON_KEYS.iter().chain(keys).map(|s| s.name).collect();
                ConfigError::UnknownKey {
                    key: k.clone(),
                    experiment,
                    valid: valid.join(", "),
                }
            })?;
            let ok = match spec.kind {
                Kind::Float => matches!(v, Value::Float(_) | Value::Integer(_)),
                Kind::Int => matches!(v, Value::Integer(i) if *i >= 0),
                Kind::Text => matches!(v, Value::String(_)),
                Kind::Bool => matches!(v, Value::Boolean(_)),
                Kind::FloatList => {
                    matches!(v, Value::Array(a) if a.iter().all(|x| matches!(x, Value::Float(_) | Value::Integer(_))))
                }
            };
            if !ok {
                return Err(ConfigError::WrongType {
                    key: k.clone(),
                    expected: spec.kind.describe(),
                    got: v.to_string(),
                });
            }
        }
        Ok(())
    }

    fn raw(&self, k: &str) -> Option<&Value> {
        self.values.get(k)
    }

    /// A number, if set.
    pub fn float_opt(&self, k: &str) -> Option<f64> {
        match self.raw(k)? {
            Value::Float(f) => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn float(&self, k: &str, default: f64) -> f64 {
        self.float_opt(k).unwrap_or(default)
    }

    pub fn int(&self, k: &str, default: u64) -> u64 {
        match self.raw(k) {
            Some(Value::Integer(i)) => *i as u64,
            _ => default,
        }
    }

    pub fn text(&self, k: &str, default: &str) -> String {
        match self.raw(k) {
            Some(Value::String(s)) => s.clone(),
            _ => default.to_string(),
        }
    }

    pub fn floats(&self, k: &str, default: &[f64]) -> Vec<f64> {
        match self.raw(k) {
            Some(Value::Array(a)) => a
                .iter()
                .filter_map(|x| match x {
                    Value::Float(f) => Some(*f),
                    Value::Integer(i) => Some(*i as f64),
                    _ => None,
                })
                .collect(),
            _ => default.to_vec(),
        }
    }

    pub fn boolean(&self, k: &str, default: bool) -> bool {
        match self.raw(k) {
            Some(Value::Boolean(b)) => *b,
            _ => default,
        }
    }

    pub fn seed(&self) -> u64 {
        self.int("seed", 1)
    }

    pub fn output(&self) -> PathBuf {
        PathBuf::from(self.text("output", "dlab-out"))
    }
}
