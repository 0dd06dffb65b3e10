//! Residual records shared by the engine, classifier, gallery and CLI.

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "banalg-lab/1";

/// Which side of the tolerance a passing residual falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Below,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `residual < tolerance`.
    pub fn below(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            bound: Bound::Below,
            passed: residual < tolerance,
            detail: None,
        }
    }

    /// Passes when `residual >= tolerance` (lower bounds).
    pub fn at_least(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            bound: Bound::AtLeast,
            passed: residual >= tolerance,
            detail: None,
        }
    }

    /// A yes/no claim; the residual is 0 on success and 1 on failure.
    pub fn claim(name: impl Into<String>, holds: bool) -> Self {
        Check {
            name: name.into(),
            residual: if holds { 0.0 } else { 1.0 },
            tolerance: 0.5,
            bound: Bound::Below,
            passed: holds,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Re-evaluates the check under a new tolerance, keeping its direction.
    pub fn retolerate(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
        self.passed = match self.bound {
            Bound::Below => self.residual < tolerance,
            Bound::AtLeast => self.residual >= tolerance,
        };
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub checks: Vec<Check>,
}

impl Diagnostics {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: Diagnostics) {
        self.checks.extend(other.checks);
    }
}
