//! Residual reports shared by the algebra, spectral and conservation checks.

use std::fmt;

/// One named residual compared against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub label: String,
    pub norm: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn new(label: impl Into<String>, norm: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            norm,
            tolerance,
        }
    }

    /// NaN norms never pass.
    pub fn passed(&self) -> bool {
        self.norm <= self.tolerance
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check={} status={} norm={:.3e} tol={:.3e}",
            self.label,
            if self.passed() { "pass" } else { "fail" },
            self.norm,
            self.tolerance
        )
    }
}

/// A list of residuals. `vacuous` marks reports with nothing to check
/// (e.g. Serre relations in rank one).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
    pub vacuous: bool,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vacuous() -> Self {
        Self {
            checks: Vec::new(),
            vacuous: true,
        }
    }

    pub fn push(&mut self, label: impl Into<String>, norm: f64, tolerance: f64) {
        self.checks.push(CheckResult::new(label, norm, tolerance));
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    /// Largest residual in the report, 0 when empty.
    pub fn max_norm(&self) -> f64 {
        self.checks.iter().map(|c| c.norm).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, label: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.label == label)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vacuous {
            return writeln!(f, "(vacuous)");
        }
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
