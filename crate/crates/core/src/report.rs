//! Verification reports shared by every checker.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const SCHEMA_VERSION: &str = "corrkit-report/1";

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    ResourceLimit,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ResourceLimit => "LIMIT",
            Status::Skipped => "SKIP",
        }
    }
}

/// Named values that locate a failure.
#[derive(Serialize, Deserialize, Clone, Debug, Default, PartialEq, Eq)]
#[serde(transparent)]
pub struct Witness(pub BTreeMap<String, String>);

impl Witness {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub id: String,
    pub statement: String,
    pub status: Status,
    pub checked: u64,
    pub failures: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// A check that was not run because an earlier layer failed.
    pub fn skipped(id: impl Into<String>, statement: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            statement: statement.into(),
            status: Status::Skipped,
            checked: 0,
            failures: 0,
            witness: None,
            detail: Some(reason.into()),
        }
    }
}

/// Accumulates observations for a single check; keeps the first witness.
#[derive(Debug)]
pub struct CheckBuilder {
    id: String,
    statement: String,
    checked: u64,
    failures: u64,
    witness: Option<Witness>,
    detail: Option<String>,
    limited: bool,
}

impl CheckBuilder {
    pub fn new(id: impl Into<String>, statement: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            statement: statement.into(),
            checked: 0,
            failures: 0,
            witness: None,
            detail: None,
            limited: false,
        }
    }

    pub fn observe(&mut self, ok: bool, witness: impl FnOnce() -> Witness) -> bool {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
        ok
    }

    pub fn fail(&mut self, witness: Witness) {
        self.observe(false, || witness);
    }

    pub fn detail(&mut self, text: impl Into<String>) {
        self.detail = Some(text.into());
    }

    pub fn limit(&mut self, text: impl Into<String>) {
        self.limited = true;
        self.detail = Some(text.into());
    }

    pub fn has_failed(&self) -> bool {
        self.failures > 0
    }

    pub fn finish(self) -> CheckRecord {
        let status = if self.failures > 0 {
            Status::Fail
        } else if self.limited {
            Status::ResourceLimit
        } else {
            Status::Pass
        };
        CheckRecord {
            id: self.id,
            statement: self.statement,
            status,
            checked: self.checked,
            failures: self.failures,
            witness: self.witness,
            detail: self.detail,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub schema: String,
    pub subject: String,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA_VERSION.to_string(),
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn add(&mut self, builder: CheckBuilder) {
        self.checks.push(builder.finish());
    }

    /// Appends another report's checks, prefixing their ids.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for mut c in other.checks {
            c.id = format!("{prefix}.{}", c.id);
            self.checks.push(c);
        }
    }

    /// Folds several reports into one, merging records that share an id:
    /// counts add up, the first failing witness wins.
    pub fn merged(subject: impl Into<String>, reports: impl IntoIterator<Item = VerificationReport>) -> Self {
        let mut out = Self::new(subject);
        for r in reports {
            for c in r.checks {
                match out.checks.iter_mut().find(|o| o.id == c.id) {
                    None => out.checks.push(c),
                    Some(o) => {
                        o.checked += c.checked;
                        o.failures += c.failures;
                        if o.status != Status::Fail && c.status == Status::Fail {
                            o.witness = c.witness;
                        }
                        o.status = match (o.status, c.status) {
                            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
                            (Status::ResourceLimit, _) | (_, Status::ResourceLimit) => Status::ResourceLimit,
                            (Status::Skipped, Status::Skipped) => Status::Skipped,
                            _ => Status::Pass,
                        };
                        if o.detail.is_none() {
                            o.detail = c.detail;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn fully_passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.failures().into_iter().map(|c| c.id.as_str()).collect()
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn status(&self, id: &str) -> Option<Status> {
        self.check(id).map(|c| c.status)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ==", self.subject);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:5} {} [{}] checked={} failures={}",
                c.status.label(),
                c.id,
                c.statement,
                c.checked,
                c.failures
            );
            if let Some(w) = &c.witness {
                for (k, v) in &w.0 {
                    let _ = writeln!(out, "        {k} = {v}");
                }
            }
            if let Some(d) = &c.detail {
                let _ = writeln!(out, "        note: {d}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_keeps_first_witness() {
        let mut b = CheckBuilder::new("x", "demo");
        b.observe(true, || Witness::new().with("k", 0));
        b.observe(false, || Witness::new().with("k", 1));
        b.observe(false, || Witness::new().with("k", 2));
        let r = b.finish();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.checked, 3);
        assert_eq!(r.failures, 2);
        assert_eq!(r.witness.unwrap().get("k"), Some("1"));
    }

    #[test]
    fn json_roundtrip() {
        let mut rep = VerificationReport::new("s");
        rep.add(CheckBuilder::new("a", "A"));
        let mut lim = CheckBuilder::new("b", "B");
        lim.limit("apex bound");
        rep.add(lim);
        let back: VerificationReport = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
        assert!(rep.passed());
        assert!(!rep.fully_passed());
    }

    #[test]
    fn merge_sums_counts_and_keeps_failure() {
        let mk = |ok: bool| {
            let mut r = VerificationReport::new("part");
            let mut b = CheckBuilder::new("x", "X");
            b.observe(ok, || Witness::new().with("at", "here"));
            r.add(b);
            r
        };
        let m = VerificationReport::merged("all", [mk(true), mk(false), mk(true)]);
        assert_eq!(m.checks.len(), 1);
        assert_eq!((m.checks[0].checked, m.checks[0].failures), (3, 1));
        assert_eq!(m.checks[0].status, Status::Fail);
        assert_eq!(m.checks[0].witness.as_ref().unwrap().get("at"), Some("here"));
    }
}
