//! CSV ledger of check results. One row per result; rows are appended and
//! never rewritten.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::path::Path;

use lacunary::diagnostics::{BoundCheckResult, Verdict};
use serde::{Deserialize, Serialize};

use crate::config::short_hash;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub bound_id: String,
    pub params_hash: String,
    pub config_hash: String,
    pub seed: String,
    pub verdict: Verdict,
    pub empirical: f64,
    pub analytic: f64,
    pub stderr: f64,
    pub trials: u64,
    /// `key=value` pairs joined by `;`, keys sorted.
    pub params: String,
    /// Joined by ` | `.
    pub notes: String,
}

impl LedgerRow {
    pub fn new(bound_id: &str, config_hash: &str, verdict: Verdict, empirical: f64, analytic: f64) -> Self {
        LedgerRow {
            bound_id: bound_id.into(),
            params_hash: String::new(),
            config_hash: config_hash.into(),
            seed: String::new(),
            verdict,
            empirical,
            analytic,
            stderr: 0.0,
            trials: 0,
            params: String::new(),
            notes: String::new(),
        }
        .with_params(&BTreeMap::new())
    }

    pub fn from_check(r: &BoundCheckResult, config_hash: &str) -> Self {
        let mut row = LedgerRow::new(&r.bound_id, config_hash, r.verdict, r.empirical_estimate, r.analytic_bound)
            .with_params(&r.parameters);
        row.stderr = r.stderr;
        row.trials = r.trials;
        row.notes = r.notes.join(" | ");
        row
    }

    /// Replaces the parameters, and the hash and seed derived from them.
    pub fn with_params(mut self, params: &BTreeMap<String, String>) -> Self {
        self.params = params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
        self.params_hash = short_hash(&format!("{}|{}", self.bound_id, self.params));
        self.seed = params.get("seed").cloned().unwrap_or_default();
        self
    }

    pub fn note(mut self, note: impl AsRef<str>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push_str(" | ");
        }
        self.notes.push_str(note.as_ref());
        self
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.split(';').find_map(|kv| kv.strip_prefix(key)?.strip_prefix('='))
    }
}

/// Builds a parameter map from `(key, value)` pairs.
pub fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn append(path: &Path, rows: &[LedgerRow]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    }
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path).map_err(CliError::io(path))?;
    let mut writer = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
    for row in rows {
        writer.serialize(row).map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(CliError::io(path))
}

/// Reads every well-formed row; malformed rows are returned by line number.
pub fn read(path: &Path) -> CliResult<(Vec<LedgerRow>, Vec<(u64, String)>)> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_path(path).map_err(|e| csv_error(path, e))?;
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for (i, rec) in reader.deserialize::<LedgerRow>().enumerate() {
        match rec {
            Ok(r) => rows.push(r),
            Err(e) => bad.push((e.position().map_or(i as u64 + 2, |p| p.line()), e.to_string())),
        }
    }
    Ok((rows, bad))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    CliError::Format { path: path.into(), message: e.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_and_read_back() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ledger.csv");
        let row = LedgerRow::new("lemma1_3", "abc", Verdict::Consistent, 0.01, 0.5)
            .with_params(&params([("seed", "4".into()), ("a", "20".into())]))
            .note("first");
        append(&path, &[row.clone()]).unwrap();
        append(&path, &[row.clone()]).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("bound_id")).count(), 1);
        let (rows, bad) = read(&path).unwrap();
        assert!(bad.is_empty());
        assert_eq!(rows, vec![row.clone(), row.clone()]);
        assert_eq!(rows[0].seed, "4");
        assert_eq!(rows[0].param("a"), Some("20"));
    }

    #[test]
    fn corrupt_rows_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ledger.csv");
        let row = LedgerRow::new("weyl", "abc", Verdict::Inconclusive, f64::NAN, 1.0);
        append(&path, &[row]).unwrap();
        fs::write(&path, fs::read_to_string(&path).unwrap() + "garbage,row\n").unwrap();
        let (rows, bad) = read(&path).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].empirical.is_nan());
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].0, 3);
    }
}
