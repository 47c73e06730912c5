//! Pass/fail entries shared by the validation and verification reports.

use alloc::string::String;
use alloc::vec::Vec;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub severity: Severity,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl CheckEntry {
    pub fn residual(name: &str, worst_residual: f64, tolerance: f64) -> Self {
        CheckEntry {
            name: name.into(),
            passed: worst_residual <= tolerance,
            worst_residual,
            tolerance,
            severity: Severity::Error,
            note: String::new(),
        }
    }

    pub fn flag(name: &str, passed: bool, note: impl Into<String>) -> Self {
        CheckEntry { name: name.into(), passed, worst_residual: 0.0, tolerance: 0.0, severity: Severity::Error, note: note.into() }
    }

    pub fn warning(mut self) -> Self {
        self.severity = Severity::Warning;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// True when every error-severity entry passed.
pub fn all_passed(checks: &[CheckEntry]) -> bool {
    checks.iter().all(|c| c.passed || c.severity == Severity::Warning)
}

pub fn failures(checks: &[CheckEntry]) -> Vec<&CheckEntry> {
    checks.iter().filter(|c| !c.passed && c.severity == Severity::Error).collect()
}

/// Default tolerances: floating-point residuals, solver accuracy, oracle agreement.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Tolerances {
    pub algebraic: f64,
    pub optimization: f64,
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { algebraic: 1e-12, optimization: 1e-6, oracle: 1e-3 }
    }
}
