use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{ElementId, SubsetMask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Concrete evidence attached to a failed (or, for searches, successful) check.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<ElementId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<SubsetMask>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<String>,
}

impl Witness {
    pub fn elements(elements: impl Into<Vec<ElementId>>) -> Self {
        Witness { elements: elements.into(), ..Default::default() }
    }

    pub fn with_sets(mut self, sets: impl Into<Vec<SubsetMask>>) -> Self {
        self.sets = sets.into();
        self
    }

    pub fn with_values<S: ToString>(mut self, values: impl IntoIterator<Item = S>) -> Self {
        self.values = values.into_iter().map(|v| v.to_string()).collect();
        self
    }

    pub fn values<S: ToString>(values: impl IntoIterator<Item = S>) -> Self {
        Witness::default().with_values(values)
    }
}

/// Outcome of a single named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub name: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub details: String,
}

impl Diagnostic {
    pub fn pass(name: impl Into<String>) -> Self {
        Diagnostic { name: name.into(), verdict: Verdict::Pass, witness: None, details: String::new() }
    }

    pub fn fail(name: impl Into<String>, witness: Witness, details: impl Into<String>) -> Self {
        Diagnostic {
            name: name.into(),
            verdict: Verdict::Fail,
            witness: Some(witness),
            details: details.into(),
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, details: impl Into<String>) -> Self {
        Diagnostic {
            name: name.into(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            witness: None,
            details: details.into(),
        }
    }

    pub fn with_details(mut self, details: impl Into<String>) -> Self {
        self.details = details.into();
        self
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}", self.name)?;
        if !self.details.is_empty() {
            write!(f, ": {}", self.details)?;
        }
        Ok(())
    }
}

/// An ordered collection of diagnostics, passing iff every member passes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiagnosticBundle(pub Vec<Diagnostic>);

impl DiagnosticBundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, d: Diagnostic) {
        self.0.push(d);
    }

    pub fn extend(&mut self, other: DiagnosticBundle) {
        self.0.extend(other.0);
    }

    pub fn all_passed(&self) -> bool {
        self.0.iter().all(Diagnostic::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter().filter(|d| !d.passed())
    }

    pub fn get(&self, name: &str) -> Option<&Diagnostic> {
        self.0.iter().find(|d| d.name == name)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Diagnostic> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Collapse into one diagnostic named `name`; the first failure's witness is kept.
    pub fn summarize(&self, name: impl Into<String>) -> Diagnostic {
        match self.failures().next() {
            None => Diagnostic::pass(name),
            Some(first) => {
                let failed: Vec<&str> = self.failures().map(|d| d.name.as_str()).collect();
                Diagnostic {
                    name: name.into(),
                    verdict: Verdict::Fail,
                    witness: first.witness.clone(),
                    details: format!("failed: {}; {}", failed.join(", "), first.details),
                }
            }
        }
    }
}

impl fmt::Display for DiagnosticBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromIterator<Diagnostic> for DiagnosticBundle {
    fn from_iter<I: IntoIterator<Item = Diagnostic>>(iter: I) -> Self {
        DiagnosticBundle(iter.into_iter().collect())
    }
}

impl IntoIterator for DiagnosticBundle {
    type Item = Diagnostic;
    type IntoIter = std::vec::IntoIter<Diagnostic>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}
