//! Flat `key = value` config files and flag/file/default resolution.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// Keys a manifest carries that describe the run rather than configure it.
pub const METADATA_KEYS: [&str; 5] = [
    "command",
    "tool_version",
    "timestamp",
    "command_line",
    "output",
];

/// Every configuration key any subcommand understands. Keys mirror the long
/// flag names.
pub const KNOWN_KEYS: [&str; 25] = [
    "seed",
    "threads",
    "out",
    "policy",
    "shots",
    "boundary",
    "geometry",
    "coin",
    "coin-state",
    "sites",
    "extent",
    "lx",
    "ly",
    "dim",
    "start",
    "steps",
    "only-last",
    "agents",
    "p",
    "tau",
    "runs",
    "snapshot-every",
    "max-steps",
    "initial-site",
    "naive",
];

fn normalize_key(k: &str) -> String {
    k.trim().replace('_', "-")
}

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
    command: Option<String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = ConfigFile::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                )));
            };
            let (k, v) = (k.trim(), v.trim());
            if METADATA_KEYS.contains(&k) {
                if k == "command" {
                    cfg.command = Some(v.to_string());
                }
                continue;
            }
            let key = normalize_key(k);
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!(
                    "config line {}: unknown key `{k}`",
                    lineno + 1
                )));
            }
            if cfg.entries.insert(key, v.to_string()).is_some() {
                return Err(CliError::Config(format!(
                    "config line {}: duplicate key `{k}`",
                    lineno + 1
                )));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// The subcommand recorded by a manifest, if this file is one.
    pub fn command(&self) -> Option<&str> {
        self.command.as_deref()
    }
}

/// Resolves each setting from flag, then file, then default, and records the
/// winning value so the manifest can replay it.
#[derive(Debug, Default)]
pub struct Resolver {
    file: BTreeMap<String, String>,
    effective: Vec<(String, String)>,
}

impl Resolver {
    pub fn new(file: ConfigFile) -> Self {
        Self {
            file: file.entries,
            effective: Vec::new(),
        }
    }

    fn file_value<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.file.get(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|e| CliError::Config(format!("config key `{key}`: {e}"))),
        }
    }

    fn record(&mut self, key: &str, value: String) {
        self.effective.push((key.to_string(), value));
    }

    pub fn get<T: FromStr + Display>(
        &mut self,
        key: &str,
        flag: Option<T>,
        default: T,
    ) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => v,
            None => self.file_value(key)?.unwrap_or(default),
        };
        self.record(key, v.to_string());
        Ok(v)
    }

    /// Like [`get`](Self::get) for settings with no default; unset values are
    /// not recorded.
    pub fn get_opt<T: FromStr + Display>(
        &mut self,
        key: &str,
        flag: Option<T>,
    ) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => Some(v),
            None => self.file_value(key)?,
        };
        if let Some(v) = &v {
            self.record(key, v.to_string());
        }
        Ok(v)
    }

    /// Settings that were resolved, in resolution order.
    pub fn effective(&self) -> &[(String, String)] {
        &self.effective
    }
}

/// Comma-separated list value, e.g. `1,0.5,0.25`.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let items = s
            .split(',')
            .map(|p| p.trim())
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<T>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if items.is_empty() {
            return Err("empty list".into());
        }
        Ok(List(items))
    }
}

impl<T: Display> Display for List<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
