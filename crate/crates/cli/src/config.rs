//! Minimal key-value config files with `[section]` headers.
//!
//! ```text
//! [problem]
//! name = tfim
//! qubits = 8
//!
//! [optimizer]
//! name = ngd
//! lr = 0.05
//!
//! [run]
//! iters = 1000
//! out = tfim-ngd.csv
//! ```
//!
//! `#` starts a comment; keys are `key = value`, one per line. Command-line
//! flags override config values.

use gorge_core::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<(String, String), String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: "unterminated section header".into(),
                })?;
                section = name.trim().to_ascii_lowercase();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: "expected `key = value`".into(),
            })?;
            if section.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "key outside of any [section]".into(),
                });
            }
            values.insert(
                (section.clone(), key.trim().to_ascii_lowercase()),
                value.trim().to_string(),
            );
        }
        Ok(Self { values })
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.values
            .get(&(section.to_string(), key.to_string()))
            .map(|s| s.as_str())
    }
}
