//! Verification reports and their JSON form. Field order is fixed (BTreeMap
//! keys, no hash iteration) so the same seed yields byte-identical output.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub status: Status,
    pub witness: String,
}

impl CheckResult {
    pub fn pass(witness: impl Into<String>) -> Self {
        CheckResult { status: Status::Pass, witness: witness.into() }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        CheckResult { status: Status::Fail, witness: witness.into() }
    }

    pub fn skip(witness: impl Into<String>) -> Self {
        CheckResult { status: Status::Skip, witness: witness.into() }
    }

    pub fn error(witness: impl Into<String>) -> Self {
        CheckResult { status: Status::Error, witness: witness.into() }
    }

    pub fn ok(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Skip)
    }
}

/// Verification report for one instantiated catalog entry (one case variant
/// at one parameter sample).
#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub entry: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub checks: BTreeMap<String, CheckResult>,
    /// Wall time; excluded from JSON so a fixed seed yields byte-identical
    /// output.
    #[serde(skip_serializing)]
    pub elapsed_ms: u64,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.ok())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }

    /// One human-readable line per check.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let title = match &self.case {
            Some(c) => format!("entry {} [{}]", self.entry, c),
            None => format!("entry {}", self.entry),
        };
        let params = if self.params.is_empty() {
            String::new()
        } else {
            let kv: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!(" ({})", kv.join(", "))
        };
        out.push_str(&format!("{title}{params}\n"));
        for (name, check) in &self.checks {
            let tag = match check.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
                Status::Error => "ERROR",
            };
            out.push_str(&format!("  {tag:<5} {name:<8} {}\n", check.witness));
        }
        out
    }
}
