//! Machine-readable verification reports.
//!
//! Every `verify_*` routine returns a `Report`: a list of named checks, each
//! passing or failing with a counterexample. Check order is fixed so report
//! output is deterministic.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    /// Counterexample or violated identity for failing checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
    /// Computed artifacts (dimensions, bases) keyed by name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub derived: BTreeMap<String, serde_json::Value>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            checks: Vec::new(),
            derived: BTreeMap::new(),
        }
    }

    pub fn check(&mut self, id: impl Into<String>, pass: bool, detail: Option<String>) {
        self.checks.push(Check {
            id: id.into(),
            pass,
            detail: if pass { None } else { detail },
        });
    }

    pub fn ok(&mut self, id: impl Into<String>) {
        self.check(id, true, None);
    }

    pub fn fail(&mut self, id: impl Into<String>, detail: impl Into<String>) {
        self.check(id, false, Some(detail.into()));
    }

    pub fn derive(&mut self, key: impl Into<String>, value: impl Serialize) {
        self.derived.insert(
            key.into(),
            serde_json::to_value(value).expect("derived value serializes"),
        );
    }

    /// Absorb another report's checks under a prefix.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.checks.push(Check {
                id: format!("{prefix}.{}", c.id),
                pass: c.pass,
                detail: c.detail,
            });
        }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.subject,
            if self.pass() { "PASS" } else { "FAIL" }
        )?;
        for c in &self.checks {
            write!(f, "  [{}] {}", if c.pass { "ok" } else { "FAIL" }, c.id)?;
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
        }
        for (k, v) in &self.derived {
            writeln!(f, "  {k} = {v}")?;
        }
        Ok(())
    }
}
