use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

/// One tunable parameter of a command.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

pub const fn key(name: &'static str, default: &'static str, help: &'static str) -> Key {
    Key { name, default, help }
}

/// Truncation controls accepted by every command.
pub const COMMON_KEYS: [Key; 3] = [
    key("dim", "auto", "starting Fock cutoff (auto = adaptive heuristic)"),
    key("trunc_tol", "1e-10", "largest probability allowed beyond the cutoff"),
    key("num_tol", "1e-9", "floating-point comparison tolerance"),
];

/// User-facing configuration problem (exit code 2).
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config_error(format!("config line {}: expected 'key = value', got '{raw}'", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(config_error(format!("config line {}: empty key or value", i + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<Vec<(String, String)>, ConfigError> {
    let text =
        fs::read_to_string(path).map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Resolved parameters of one run: defaults < config file < flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn resolve<'a>(
        keys: impl IntoIterator<Item = &'a Key>,
        file: &[(String, String)],
        flags: &[(String, String)],
    ) -> Result<Self, ConfigError> {
        let mut values: BTreeMap<String, String> = keys
            .into_iter()
            .map(|k| (k.name.to_string(), k.default.to_string()))
            .collect();
        for (k, v) in file.iter().chain(flags) {
            match values.get_mut(k) {
                Some(slot) => *slot = v.clone(),
                None => {
                    let known: Vec<&str> = values.keys().map(String::as_str).collect();
                    return Err(config_error(format!(
                        "unknown key '{k}' (accepted: {})",
                        known.join(", ")
                    )));
                }
            }
        }
        Ok(Self { values })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn str(&self, key: &str) -> &str {
        self.values
            .get(key)
            .map(String::as_str)
            .unwrap_or_else(|| panic!("parameter '{key}' is not declared"))
    }

    pub fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        let raw = self.str(key);
        raw.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| config_error(format!("{key}: expected a finite number, got '{raw}'")))
    }

    pub fn usize(&self, key: &str) -> Result<usize, ConfigError> {
        let raw = self.str(key);
        raw.parse::<usize>()
            .map_err(|_| config_error(format!("{key}: expected a non-negative integer, got '{raw}'")))
    }

    /// Hex SHA-256 of the command name and every resolved `key=value` line.
    pub fn hash(&self, command: &str) -> String {
        let mut h = Sha256::new();
        h.update(format!("command={command}\n"));
        for (k, v) in &self.values {
            h.update(format!("{k}={v}\n"));
        }
        hex::encode(h.finalize())
    }
}
