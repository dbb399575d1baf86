//! Machine-readable run reports: JSON with `tool_version`, `input_digest`
//! and `checks[]`. Timings are kept apart so that two runs on the same input
//! produce byte-identical [`Report::deterministic_json`].

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Diagnostic, DiagnosticBundle, Verdict};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    /// Hex SHA-256 of the input (source text, or the command line for
    /// inputs that are generated).
    pub input_digest: String,
    pub checks: Vec<Diagnostic>,
    /// Primary text output of the command, such as emitted DSL.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    /// Wall-clock milliseconds per phase.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub timings: BTreeMap<String, f64>,
}

pub fn digest(input: &[u8]) -> String {
    hex::encode(Sha256::digest(input))
}

impl Report {
    pub fn new(input: &[u8]) -> Self {
        Report { tool_version: TOOL_VERSION.into(), input_digest: digest(input), checks: Vec::new(), output: None, timings: BTreeMap::new() }
    }

    pub fn push(&mut self, d: Diagnostic) {
        self.checks.push(d);
    }

    /// Appends a bundle, prefixing each check name with `scope: `.
    pub fn extend(&mut self, scope: &str, bundle: DiagnosticBundle) {
        for mut d in bundle.0 {
            if !scope.is_empty() {
                d.name = format!("{scope}: {}", d.name);
            }
            self.checks.push(d);
        }
    }

    pub fn time(&mut self, phase: &str, ms: f64) {
        *self.timings.entry(phase.into()).or_default() += ms;
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|d| d.verdict == Verdict::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Diagnostic> {
        self.checks.iter().filter(|d| d.verdict == Verdict::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// JSON without timings.
    pub fn deterministic_json(&self) -> String {
        Report { timings: BTreeMap::new(), ..self.clone() }.to_json()
    }

    /// One line per check, failures with their details and witness values.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|d| d.name.len()).max().unwrap_or(0);
        for d in &self.checks {
            let v = match d.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            };
            write!(out, "{v}  {:width$}", d.name).unwrap();
            if !d.details.is_empty() {
                write!(out, "  {}", d.details).unwrap();
            }
            if let Some(w) = d.witness.as_ref().filter(|w| !w.values.is_empty()) {
                write!(out, "  [{}]", w.values.join(", ")).unwrap();
            }
            out.truncate(out.trim_end().len());
            out.push('\n');
        }
        let failed = self.failures().count();
        writeln!(out, "{} checks, {} failed, digest {}", self.checks.len(), failed, &self.input_digest[..12]).unwrap();
        out
    }
}
