//! CSV/JSON emission of result tables.
//!
//! CSV: one header row of column names, `,` separated, every value with 17
//! significant digits, `\n` line endings. JSON mirrors the table fields.
//! Both round-trip f64 values bit-exactly.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thermoq::analysis::{Column, CurveTable};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Usage(format!("unknown format {other:?}"))),
        }
    }
}

/// Column-oriented table with the same shape as a [`CurveTable`] but no
/// grid requirements, so single-row results fit too.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub label: String,
    pub columns: Vec<Column>,
    pub meta: BTreeMap<String, String>,
}

impl From<CurveTable> for Table {
    fn from(t: CurveTable) -> Self {
        Self {
            label: t.label,
            columns: t.columns,
            meta: t.meta,
        }
    }
}

impl Table {
    pub fn new(label: impl Into<String>, columns: Vec<(&str, Vec<f64>)>) -> Self {
        Self {
            label: label.into(),
            columns: columns
                .into_iter()
                .map(|(name, values)| Column {
                    name: name.to_string(),
                    values,
                })
                .collect(),
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for i in 0..self.rows() {
            let row: Vec<String> = self
                .columns
                .iter()
                .map(|c| format!("{:.16e}", c.values[i]))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(label: &str, text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| CliError::Usage("empty CSV".into()))?;
        let names: Vec<&str> = header.split(',').collect();
        let mut values = vec![Vec::new(); names.len()];
        for (i, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != names.len() {
                return Err(CliError::Usage(format!("CSV row {} has {} fields", i + 2, fields.len())));
            }
            for (col, f) in values.iter_mut().zip(fields) {
                col.push(f.parse::<f64>().map_err(|_| {
                    CliError::Usage(format!("CSV row {}: bad number {f:?}", i + 2))
                })?);
            }
        }
        Ok(Self::new(label, names.into_iter().zip(values).collect()))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        Ok(match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                s
            }
        })
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory and an atomic rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
