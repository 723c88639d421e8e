//! Flat `key = value` configuration files and parameter resolution.
//!
//! Every parameter is resolved from the command-line flag if given, else the
//! config file, else the built-in default. The resolved values are recorded
//! for the run manifest.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Parses `key = value` lines; `#` starts a comment and blank lines are skipped.
pub fn parse_config(text: &str) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value', got '{raw}'", n + 1)))?;
        let key = normalise(key.trim());
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", n + 1)));
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key '{key}'", n + 1)));
        }
    }
    Ok(out)
}

fn normalise(key: &str) -> String {
    key.to_ascii_lowercase().replace('_', "-")
}

/// Merges flags, config-file entries and defaults, remembering what was used.
#[derive(Debug, Default)]
pub struct Resolver {
    file: HashMap<String, String>,
    used: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(file: HashMap<String, String>) -> Self {
        Self {
            file,
            used: BTreeMap::new(),
        }
    }

    pub fn from_path(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Ok(Self::new(parse_config(&std::fs::read_to_string(p)?)?)),
            None => Ok(Self::default()),
        }
    }

    fn from_file<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        self.file
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|e| Error::Config(format!("config key '{key}' = '{v}': {e}")))
            })
            .transpose()
    }

    pub fn value<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => v,
            None => self.from_file(key)?.unwrap_or(default),
        };
        self.used.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    /// Optional parameter without a default.
    pub fn optional<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => Some(v),
            None => self.from_file(key)?,
        };
        self.used
            .insert(key.to_string(), v.as_ref().map_or("none".to_string(), ToString::to_string));
        Ok(v)
    }

    /// Comma-separated list parameter.
    pub fn list<T: FromStr + Display + Clone>(&mut self, key: &str, flag: Option<Vec<T>>, default: Vec<T>) -> Result<Vec<T>>
    where
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(text) => text
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|e| Error::Config(format!("config key '{key}' item '{s}': {e}")))
                    })
                    .collect::<Result<Vec<T>>>()?,
                None => default,
            },
        };
        if v.is_empty() {
            return Err(Error::Config(format!("'{key}' needs at least one value")));
        }
        let joined = v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        self.used.insert(key.to_string(), joined);
        Ok(v)
    }

    /// Keys in the config file that no parameter asked for.
    pub fn unused_keys(&self) -> Vec<String> {
        let mut keys: Vec<String> = self.file.keys().filter(|k| !self.used.contains_key(*k)).cloned().collect();
        keys.sort();
        keys
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.used
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs() {
        let c = parse_config("# comment\np = 3\n\ngamma_list = 0.8, 1.2 # trailing\n").unwrap();
        assert_eq!(c["p"], "3");
        assert_eq!(c["gamma-list"], "0.8, 1.2");
        assert!(parse_config("p 3").is_err());
        assert!(parse_config("p = 1\np = 2").is_err());
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let mut r = Resolver::new(parse_config("p = 4\ngamma = 0.9,1.1").unwrap());
        assert_eq!(r.value("p", Some(2usize), 3).unwrap(), 2);
        assert_eq!(r.value("p", None::<usize>, 3).unwrap(), 4);
        assert_eq!(r.value("samples", None::<usize>, 512).unwrap(), 512);
        assert_eq!(r.list("gamma", None::<Vec<f64>>, vec![1.0]).unwrap(), vec![0.9, 1.1]);
        assert_eq!(r.resolved()["gamma"], "0.9,1.1");
        let mut bad = Resolver::new(parse_config("p = three").unwrap());
        assert!(bad.value("p", None::<usize>, 3).is_err());
    }

    #[test]
    fn reports_unused_keys() {
        let mut r = Resolver::new(parse_config("p = 4\ntypo = 1").unwrap());
        r.value("p", None::<usize>, 3).unwrap();
        assert_eq!(r.unused_keys(), vec!["typo".to_string()]);
    }
}
