//! Merged key/value settings: an optional `key = value` config file
//! overlaid by command-line flags.

use std::collections::BTreeMap;
use std::str::FromStr;

use super::CliError;

/// Every recognised key, spelled as the flag name with dashes replaced by
/// underscores.
pub const KEYS: &[&str] = &[
    "output",
    "spreading_factor",
    "users",
    "k_from",
    "k_to",
    "path_loss",
    "directivity_db",
    "cochannel_cells",
    "reuse_ratio",
    "cochannel_load",
    "target_ber",
    "bits",
    "seed",
    "mode",
    "elements",
    "spacing",
    "desired_deg",
    "null_deg",
    "pointing_deg",
    "flat_top",
    "doa_file",
    "theta_min_deg",
    "antenna",
];

/// Keys that accept several values (repeated flags, or comma-separated in
/// the config file).
pub const LIST_KEYS: &[&str] = &["path_loss", "null_deg", "antenna"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Parses config file text: `key = value` lines, `#` starts a comment.
    pub fn parse_config(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected 'key = value'", i + 1))
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", i + 1)));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Settings { values })
    }

    pub fn from_pairs<I, K, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        Settings {
            values: pairs.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
        }
    }

    /// `self` overlaid by `flags`; a key present in `flags` always wins.
    pub fn overlay(mut self, flags: Settings) -> Self {
        self.values.extend(flags.values);
        self
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("invalid value '{v}' for --{}", flag(key)))),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.get(key)?
            .ok_or_else(|| CliError::Usage(format!("missing required setting --{}", flag(key))))
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse().map_err(|_| {
                        CliError::Usage(format!("invalid value '{s}' for --{}", flag(key)))
                    })
                })
                .collect::<Result<Vec<T>, _>>()
                .map(Some),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.raw(key) {
            None => Ok(false),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(v) => Err(CliError::Usage(format!("invalid boolean '{v}' for --{}", flag(key)))),
        }
    }
}

fn flag(key: &str) -> String {
    key.replace('_', "-")
}
