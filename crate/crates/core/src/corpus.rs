//! JSON Lines regression corpus.
//!
//! One object per line: `{"name": .., "formula": .., "expected_cl": .., "expected_il": ..}`
//! with the two `expected_*` fields optional.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;
use crate::formula::Formula;
use crate::syntax;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub formula: Formula,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_cl: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_il: Option<bool>,
}

impl CorpusEntry {
    pub fn new(name: impl Into<String>, formula: Formula) -> Self {
        CorpusEntry { name: name.into(), formula, expected_cl: None, expected_il: None }
    }
}

#[derive(Deserialize)]
struct RawEntry {
    name: String,
    formula: String,
    #[serde(default)]
    expected_cl: Option<bool>,
    #[serde(default)]
    expected_il: Option<bool>,
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    parse_corpus(&text)
}

/// Blank lines are skipped; line numbers are 1-based.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawEntry = serde_json::from_str(line)
            .map_err(|e| CorpusError::Json { line: line_no, message: e.to_string() })?;
        let formula = syntax::parse(&raw.formula)
            .map_err(|source| CorpusError::Formula { line: line_no, source })?;
        if !seen.insert(raw.name.clone()) {
            return Err(CorpusError::Duplicate { line: line_no, name: raw.name });
        }
        entries.push(CorpusEntry {
            name: raw.name,
            formula,
            expected_cl: raw.expected_cl,
            expected_il: raw.expected_il,
        });
    }
    Ok(entries)
}

pub fn write_corpus(entries: &[CorpusEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&serde_json::to_string(e).expect("corpus entry serializes"));
        out.push('\n');
    }
    out
}
