//! Pass/fail reports with residuals.

use std::fmt;

use serde_json::{json, Value};

use crate::element::TensorElement;

/// One named check. On failure, `at` names the first offending basis tuple
/// (or other location) and `residual` holds the nonzero difference there.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub at: Option<String>,
    pub residual: Option<TensorElement>,
    pub note: Option<String>,
    /// Every offending location, in iteration order.
    pub offending: Vec<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: true,
            at: None,
            residual: None,
            note: None,
            offending: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, note: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: false,
            at: None,
            residual: None,
            note: Some(note.into()),
            offending: Vec::new(),
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool) -> Self {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, "condition does not hold")
        }
    }

    /// Record an offending location; the first one also keeps its residual.
    pub fn record(&mut self, at: String, residual: TensorElement) {
        if self.pass {
            self.pass = false;
            self.at = Some(at.clone());
            self.residual = Some(residual);
        }
        self.offending.push(at);
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "name": self.name, "pass": self.pass });
        if let Some(at) = &self.at {
            v["at"] = json!(at);
        }
        if let Some(r) = &self.residual {
            v["residual"] = json!(r.to_string());
        }
        if let Some(n) = &self.note {
            v["note"] = json!(n);
        }
        v
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        let prefix = other.subject;
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}: {}", c.name);
            }
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Vec<Value> {
        self.checks.iter().map(Check::to_json).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.subject.is_empty() {
            writeln!(f, "{}", self.subject)?;
        }
        for c in &self.checks {
            write!(f, "  [{}] {}", if c.pass { "pass" } else { "FAIL" }, c.name)?;
            if let Some(at) = &c.at {
                write!(f, " at {at}")?;
            }
            if let Some(n) = &c.note {
                write!(f, " ({n})")?;
            }
            if let Some(r) = &c.residual {
                write!(f, "\n      residual: {r}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
