//! Flat `key = value` configuration files with `#` comments.
//!
//! Lines are `key = value`; blank lines and lines starting with `#` are
//! skipped, and a trailing `# comment` on a value line is stripped. Later
//! occurrences of a key override earlier ones, and CLI flags override file
//! keys. Every recognized key is listed by the experiment that reads it;
//! unknown keys are rejected so typos cannot silently fall back to
//! defaults.

use billiard_core::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "{}:{}: expected `key = value`, got {raw:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            let value = value.split('#').next().unwrap_or("").trim();
            let key = key.trim();
            if key.is_empty() || value.is_empty() {
                return Err(Error::Config(format!(
                    "{}:{}: empty key or value in {raw:?}",
                    path.display(),
                    lineno + 1
                )));
            }
            values.insert(key.to_string(), value.to_string());
        }
        Ok(Self { values })
    }

    /// CLI-flag override; wins over any file key.
    pub fn set(&mut self, key: &str, value: String) {
        self.values.insert(key.to_string(), value);
    }

    /// Reject keys that no part of the requested run reads.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for key in self.values.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Config(format!(
                    "unknown config key `{key}`; known keys: {}",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("key `{key}`: expected a number, got {v:?}"))),
        }
    }

    pub fn get_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| {
                Error::Config(format!(
                    "key `{key}`: expected a nonnegative integer, got {v:?}"
                ))
            }),
        }
    }

    pub fn get_u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| {
                Error::Config(format!(
                    "key `{key}`: expected a nonnegative integer, got {v:?}"
                ))
            }),
        }
    }
}
