//! Plain-text `key = value` configuration files.
//!
//! Keys are the long flag names (`system`, `L`, `omega`, `T`, ...). Blank
//! lines and lines starting with `#` are ignored. Command-line flags always
//! win over file values.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

pub const CONFIG_ENV: &str = "THERMOQ_CONFIG";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key=value", lineno + 1))
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// The file named by `--config`, else by `THERMOQ_CONFIG`, else empty.
    pub fn discover(explicit: Option<&Path>) -> Result<Self, CliError> {
        if let Some(p) = explicit {
            return Self::load(p);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {v:?}")))
            })
            .transpose()
    }

    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim().parse::<T>().map_err(|_| {
                            CliError::Usage(format!("config key {key}: cannot parse {s:?}"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    /// Flag value if given, else the file value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn pick_list<T: FromStr>(
        &self,
        flag: Option<Vec<T>>,
        key: &str,
    ) -> Result<Option<Vec<T>>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get_list(key),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_values() {
        let c = ConfigFile::parse("# comment\nsystem = box\nL=3\n\nT = 0.1, 0.2\n").unwrap();
        assert_eq!(c.raw("system"), Some("box"));
        assert_eq!(c.get::<f64>("L").unwrap(), Some(3.0));
        assert_eq!(c.get_list::<f64>("T").unwrap(), Some(vec![0.1, 0.2]));
        assert_eq!(c.get::<f64>("omega").unwrap(), None);
    }

    #[test]
    fn flag_beats_file() {
        let c = ConfigFile::parse("L = 3").unwrap();
        assert_eq!(c.pick(Some(5.0), "L").unwrap(), Some(5.0));
        assert_eq!(c.pick::<f64>(None, "L").unwrap(), Some(3.0));
    }

    #[test]
    fn rejects_malformed() {
        assert!(ConfigFile::parse("just text").is_err());
        let c = ConfigFile::parse("L = three").unwrap();
        assert!(c.get::<f64>("L").is_err());
    }
}
