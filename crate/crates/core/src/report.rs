//! Named residual checks collected into a pass/fail report.

use serde::Serialize;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `residual <= tol`. NaN residuals always fail.
    pub fn push(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        let pass = residual.is_finite() && residual <= tol;
        self.checks.push(Check { name: name.into(), residual, tol, pass });
    }

    /// Records a boolean condition as a residual of 0 or 1.
    pub fn push_bool(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push(Check {
            name: name.into(),
            residual: if ok { 0.0 } else { 1.0 },
            tol: 0.0,
            pass: ok,
        });
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.checks.push(Check { name: format!("{prefix}{}", c.name), ..c });
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
