//! `[section]` / `key = value` configuration files.
//!
//! `#` starts a comment, either on its own line or after a value. Keys are
//! looked up case-sensitively and every key must be consumed by the scenario
//! builder; leftovers are reported as unknown.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    value: String,
    line: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: BTreeMap<(String, String), Entry>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        let mut section: Option<String> = None;
        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::config(format!("line {line_no}: unterminated section header")))?;
                let name = name.trim();
                if name.is_empty() {
                    return Err(CliError::config(format!("line {line_no}: empty section name")));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("line {line_no}: expected `key = value`, found `{line}`")))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::config(format!("line {line_no}: missing key")));
            }
            let section = section
                .clone()
                .ok_or_else(|| CliError::config(format!("line {line_no}: key `{key}` appears before any section")))?;
            let entry = Entry {
                value: value.trim().to_string(),
                line: line_no,
            };
            if let Some(previous) = entries.insert((section.clone(), key.to_string()), entry) {
                return Err(CliError::config(format!(
                    "{section}.{key}: defined twice (lines {} and {line_no})",
                    previous.line
                )));
            }
        }
        Ok(Config { entries })
    }

    /// Removes and returns the raw value of `section.key`.
    pub fn take(&mut self, section: &str, key: &str) -> Option<String> {
        self.entries
            .remove(&(section.to_string(), key.to_string()))
            .map(|e| e.value)
    }

    /// Parses and removes `section.key`, if present.
    pub fn take_parsed<T: FromStr>(&mut self, section: &str, key: &str) -> Result<Option<T>, CliError> {
        match self.take(section, key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::config(format!(
                    "{section}.{key}: cannot parse `{raw}` as {}",
                    short_type_name::<T>()
                ))
            }),
        }
    }

    pub fn take_or<T: FromStr>(&mut self, section: &str, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.take_parsed(section, key)?.unwrap_or(default))
    }

    pub fn take_bool_or(&mut self, section: &str, key: &str, default: bool) -> Result<bool, CliError> {
        match self.take(section, key) {
            None => Ok(default),
            Some(raw) => match raw.to_ascii_lowercase().as_str() {
                "true" | "yes" | "on" | "1" => Ok(true),
                "false" | "no" | "off" | "0" => Ok(false),
                _ => Err(CliError::config(format!(
                    "{section}.{key}: expected true or false, found `{raw}`"
                ))),
            },
        }
    }

    pub fn has_section(&self, section: &str) -> bool {
        self.entries.keys().any(|(s, _)| s == section)
    }

    /// Fails on the first key nobody asked for.
    pub fn finish(self) -> Result<(), CliError> {
        match self.entries.into_iter().next() {
            None => Ok(()),
            Some(((section, key), entry)) => Err(CliError::config(format!(
                "{section}.{key}: unknown key (line {})",
                entry.line
            ))),
        }
    }
}

fn short_type_name<T>() -> &'static str {
    let full = std::any::type_name::<T>();
    full.rsplit("::").next().unwrap_or(full)
}
