//! Verification reports: one line per checked case plus a summary.

use std::fmt;

use serde::Serialize;

use crate::world::World;
use crate::Element;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub identity: String,
    /// Index tuple or word the identity was instantiated at.
    pub case: String,
    /// Rendered residual; `0` for an exact pass.
    pub residual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub results: Vec<CheckResult>,
    pub notes: Vec<String>,
}

/// `(1,2,3)`
pub fn tuple(ix: &[u32]) -> String {
    let parts: Vec<String> = ix.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

impl Report {
    pub fn new(suite: &str) -> Report {
        Report { suite: suite.to_string(), results: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, identity: &str, case: String, residual: String, pass: bool) {
        self.results.push(CheckResult { identity: identity.to_string(), case, residual, pass });
    }

    /// Record an exact check: passes iff `residual` is already zero
    /// (callers pass normalized residuals).
    pub fn exact(&mut self, w: &World, identity: &str, case: String, residual: &Element) {
        self.push(identity, case, w.render(residual), residual.is_zero());
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn merge(&mut self, other: Report) {
        self.results.extend(other.results);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn num_passed(&self) -> usize {
        self.results.iter().filter(|r| r.pass).count()
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {}/{} passed{}",
            self.suite,
            self.num_passed(),
            self.results.len(),
            if self.passed() { "" } else { " FAILED" }
        )
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(
                f,
                "{} {} {} residual: {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.identity,
                r.case,
                r.residual
            )?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        writeln!(f, "{}", self.summary())
    }
}
