use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::classifier::Verdict;
use crate::error::Result;

pub const SCHEMA: u32 = 1;

/// Machine-readable result of one command.
///
/// Maps are ordered and no timestamps are recorded, so the same config,
/// flags and seed give the same bytes.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub label: String,
    pub command: String,
    pub verdicts: BTreeMap<String, Verdict>,
    /// Classifiers that do not apply to this operator, with the reason.
    pub skipped: BTreeMap<String, String>,
    pub artifacts: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    /// Command parameters as used, after defaults.
    pub parameters: BTreeMap<String, serde_json::Value>,
    /// Command-specific summary.
    pub details: serde_json::Value,
    pub exit_code: i32,
}

impl Report {
    pub fn new(label: &str, command: &str) -> Self {
        Report {
            schema: SCHEMA,
            label: label.into(),
            command: command.into(),
            verdicts: BTreeMap::new(),
            skipped: BTreeMap::new(),
            artifacts: Vec::new(),
            seed: None,
            version: env!("CARGO_PKG_VERSION").into(),
            parameters: BTreeMap::new(),
            details: serde_json::Value::Null,
            exit_code: 0,
        }
    }

    pub fn param<T: Serialize>(&mut self, key: &str, value: T) {
        self.parameters.insert(key.into(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Writes `report.json` under `dir` and returns its path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("report.json");
        std::fs::write(&path, self.to_json()?)?;
        Ok(path)
    }
}
