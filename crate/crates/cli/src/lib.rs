//! Batch driver: loads instances, runs the selected suites and compares the
//! outcome with each instance's declared expectations.

pub mod commands;
pub mod corpus;
pub mod input;
pub mod suites;

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use corrkit::report::{Status, VerificationReport};

use crate::input::{parse_input, pattern_matches, read_file, Format, InputError, Instance, Suite, WorkspaceConfig};

pub const RUN_SCHEMA: &str = "corrkit-run/1";

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub report: VerificationReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceOutcome {
    pub name: String,
    pub kind: String,
    pub suites: Vec<SuiteOutcome>,
    /// Failing ids no `expect.fail` pattern covers.
    pub unexpected_failures: Vec<String>,
    /// Resource-limited ids no `expect.limit` pattern covers.
    pub unexpected_limits: Vec<String>,
    /// Expected patterns that matched no failing (or limited) id.
    pub missing: Vec<String>,
    pub as_expected: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Settings {
    pub max_dim: usize,
    pub max_apex: usize,
    pub level: usize,
    pub suites: Vec<Suite>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub checks: usize,
    pub failed: usize,
    pub limited: usize,
    pub skipped: usize,
    pub unexpected: usize,
    pub exit_code: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: String,
    pub settings: Settings,
    pub instances: Vec<InstanceOutcome>,
    pub summary: Summary,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("run report serializes") + "\n",
            Format::Text => self.to_text(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for inst in &self.instances {
            let _ = writeln!(out, "### {} [{}]", inst.name, inst.kind);
            for s in &inst.suites {
                out.push_str(&s.report.to_text());
            }
            let _ = writeln!(out, "=> {}", verdict(inst));
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} instances, {} checks, {} failed, {} at a resource limit, {} skipped, {} unexpected; exit {}",
            s.instances, s.checks, s.failed, s.limited, s.skipped, s.unexpected, s.exit_code
        );
        out
    }
}

fn verdict(inst: &InstanceOutcome) -> String {
    if inst.as_expected {
        return "as expected".into();
    }
    let mut parts = Vec::new();
    if !inst.unexpected_failures.is_empty() {
        parts.push(format!("failed {}", inst.unexpected_failures.join(", ")));
    }
    if !inst.unexpected_limits.is_empty() {
        parts.push(format!("limited {}", inst.unexpected_limits.join(", ")));
    }
    if !inst.missing.is_empty() {
        parts.push(format!("expected but not observed {}", inst.missing.join(", ")));
    }
    format!("UNEXPECTED: {}", parts.join("; "))
}

/// Input files in order, or the built-in corpus when there are none.
pub fn load_instances(cfg: &WorkspaceConfig) -> Result<Vec<Instance>, InputError> {
    let mut all = if cfg.inputs.is_empty() {
        corpus::corpus().instances
    } else {
        let mut v = Vec::new();
        for p in &cfg.inputs {
            v.extend(parse_input(&p.display().to_string(), &read_file(p)?)?.instances);
        }
        v
    };
    for name in &cfg.instances {
        if !all.iter().any(|i| &i.name == name) {
            return Err(InputError::new("--instance", format!("no instance named {name}")));
        }
    }
    all.retain(|i| cfg.selects_instance(&i.name));
    for (k, inst) in all.iter().enumerate() {
        suites::validate_instance(inst)
            .map_err(|m| InputError::new(inst.name.clone(), m).at(format!("instances[{k}].spec")))?;
    }
    Ok(all)
}

/// Splits an instance's ids into unexpected failures, unexpected limits and
/// expected patterns that were not observed.
pub fn evaluate(inst: &Instance, reports: &[&VerificationReport]) -> (Vec<String>, Vec<String>, Vec<String>) {
    let ids = |st: Status| -> Vec<String> {
        reports
            .iter()
            .flat_map(|r| r.checks.iter())
            .filter(|c| c.status == st)
            .map(|c| c.id.clone())
            .collect()
    };
    let (failed, limited) = (ids(Status::Fail), ids(Status::ResourceLimit));
    let covered = |pats: &[String], id: &str| pats.iter().any(|p| pattern_matches(p, id));
    let unexpected_f = failed.iter().filter(|id| !covered(&inst.expect.fail, id)).cloned().collect();
    let unexpected_l = limited.iter().filter(|id| !covered(&inst.expect.limit, id)).cloned().collect();
    let mut missing = Vec::new();
    if !reports.is_empty() {
        for p in &inst.expect.fail {
            if !failed.iter().any(|id| pattern_matches(p, id)) {
                missing.push(format!("fail {p}"));
            }
        }
        for p in &inst.expect.limit {
            if !limited.iter().any(|id| pattern_matches(p, id)) {
                missing.push(format!("limit {p}"));
            }
        }
    }
    (unexpected_f, unexpected_l, missing)
}

/// Runs every selected suite on every instance. Instances run in parallel and
/// are reported in input order.
pub fn run(cfg: &WorkspaceConfig) -> Result<RunReport, InputError> {
    cfg.validate()?;
    let instances = load_instances(cfg)?;
    let results: Vec<Result<InstanceOutcome, InputError>> = instances
        .par_iter()
        .map(|inst| {
            let runs = suites::run_instance(inst, cfg).map_err(|m| InputError::new(inst.name.clone(), m))?;
            let reports: Vec<&VerificationReport> = runs.iter().map(|r| &r.report).collect();
            let (uf, ul, missing) = evaluate(inst, &reports);
            let as_expected = uf.is_empty() && ul.is_empty() && missing.is_empty();
            Ok(InstanceOutcome {
                name: inst.name.clone(),
                kind: inst.spec.kind().to_string(),
                suites: runs
                    .into_iter()
                    .map(|r| SuiteOutcome {
                        suite: r.suite,
                        report: r.report,
                    })
                    .collect(),
                unexpected_failures: uf,
                unexpected_limits: ul,
                missing,
                as_expected,
            })
        })
        .collect();
    let instances = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut summary = Summary {
        instances: instances.len(),
        ..Summary::default()
    };
    for i in &instances {
        for c in i.suites.iter().flat_map(|s| s.report.checks.iter()) {
            summary.checks += 1;
            match c.status {
                Status::Fail => summary.failed += 1,
                Status::ResourceLimit => summary.limited += 1,
                Status::Skipped => summary.skipped += 1,
                Status::Pass => {}
            }
        }
        summary.unexpected += usize::from(!i.as_expected);
    }
    summary.exit_code = if summary.unexpected == 0 { 0 } else { 1 };
    let suites = if cfg.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        Suite::ALL.into_iter().filter(|s| cfg.suites.contains(s)).collect()
    };
    Ok(RunReport {
        schema: RUN_SCHEMA.into(),
        settings: Settings {
            max_dim: cfg.max_dim,
            max_apex: cfg.max_apex,
            level: cfg.level,
            suites,
        },
        instances,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::Expectation;
    use corrkit::report::{CheckBuilder, Witness};

    fn inst(fail: &[&str], limit: &[&str]) -> Instance {
        Instance {
            name: "t".into(),
            expect: Expectation {
                fail: fail.iter().map(|s| s.to_string()).collect(),
                limit: limit.iter().map(|s| s.to_string()).collect(),
            },
            spec: crate::input::InstanceSpec::Staircase { n: 1 },
        }
    }

    fn report() -> VerificationReport {
        let mut r = VerificationReport::new("r");
        let mut a = CheckBuilder::new("axioms.nagata.3.P", "");
        a.fail(Witness::new().with("f", "x"));
        r.add(a);
        r.add(CheckBuilder::new("axioms.nagata.2", ""));
        let mut l = CheckBuilder::new("hocat", "");
        l.limit("infinite");
        r.add(l);
        r
    }

    #[test]
    fn expectations_cover_by_prefix() {
        let r = report();
        let (uf, ul, miss) = evaluate(&inst(&["axioms.nagata.3"], &["hocat"]), &[&r]);
        assert!(uf.is_empty() && ul.is_empty() && miss.is_empty());
    }

    #[test]
    fn unexpected_and_missing_are_reported() {
        let r = report();
        let (uf, ul, miss) = evaluate(&inst(&["axioms.nagata.2"], &[]), &[&r]);
        assert_eq!(uf, vec!["axioms.nagata.3.P"]);
        assert_eq!(ul, vec!["hocat"]);
        assert_eq!(miss, vec!["fail axioms.nagata.2"]);
        let (_, _, miss) = evaluate(&inst(&["anything"], &[]), &[]);
        assert!(miss.is_empty());
    }
}
