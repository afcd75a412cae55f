//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Number of individual identities evaluated.
    pub checked: usize,
    /// Identities skipped because a term fell outside the truncation.
    pub skipped: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub status: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Report {
        Report { status: "pass".into(), checks: vec![] }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Starts a check; record results through the returned handle.
    pub fn check(&mut self, name: &str) -> &mut Check {
        self.checks.push(Check { name: name.into(), checked: 0, skipped: 0, passed: true, witness: None });
        self.status = if self.passed() { "pass".into() } else { "fail".into() };
        self.checks.last_mut().unwrap()
    }

    pub fn finish(mut self) -> Report {
        self.status = if self.passed() { "pass".into() } else { "fail".into() };
        self
    }

    pub fn merge(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
        self.status = if self.passed() { "pass".into() } else { "fail".into() };
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl Check {
    pub fn ok(&mut self) {
        self.checked += 1;
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    /// Records a failure; only the first witness is kept.
    pub fn fail(&mut self, witness: impl Into<String>) {
        self.checked += 1;
        if self.passed {
            self.passed = false;
            self.witness = Some(witness.into());
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.ok()
        } else {
            self.fail(witness())
        }
    }
}
