//! Three-valued comparison of Monte Carlo estimates with analytic bounds.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Violated,
    Inconclusive,
}

impl Verdict {
    /// `Violated` only when the estimate exceeds the bound by more than three
    /// standard errors; `Consistent` when it does not exceed it at all.
    pub fn classify(empirical: f64, stderr: f64, analytic: f64) -> Self {
        if empirical - 3.0 * stderr > analytic {
            Verdict::Violated
        } else if empirical <= analytic {
            Verdict::Consistent
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "consistent" => Ok(Verdict::Consistent),
            "violated" => Ok(Verdict::Violated),
            "inconclusive" => Ok(Verdict::Inconclusive),
            other => Err(format!("unknown verdict {other:?}")),
        }
    }
}

/// One empirical-vs-analytic comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckResult {
    pub bound_id: String,
    pub parameters: BTreeMap<String, String>,
    pub analytic_bound: f64,
    pub empirical_estimate: f64,
    pub trials: u64,
    pub stderr: f64,
    pub verdict: Verdict,
    /// Caveats: truncations, measured surrogates, infeasibility explanations.
    pub notes: Vec<String>,
}

impl BoundCheckResult {
    pub(crate) fn new(bound_id: &str, analytic_bound: f64, empirical_estimate: f64, trials: u64, stderr: f64) -> Self {
        Self {
            bound_id: bound_id.to_string(),
            parameters: BTreeMap::new(),
            analytic_bound,
            empirical_estimate,
            trials,
            stderr,
            verdict: Verdict::classify(empirical_estimate, stderr, analytic_bound),
            notes: Vec::new(),
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub(crate) fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// Frequency of `hits` in `trials` and its binomial standard error.
pub fn frequency(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 0.0);
    }
    let p = hits as f64 / trials as f64;
    (p, (p * (1.0 - p) / trials as f64).sqrt())
}
