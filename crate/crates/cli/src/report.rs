//! JSON report schema.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub paper_anchor: String,
    pub status: Status,
    pub expected: Value,
    pub actual: Value,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        anchor: &str,
        ok: bool,
        expected: Value,
        actual: Value,
    ) -> Self {
        Check {
            name: name.into(),
            paper_anchor: anchor.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            expected,
            actual,
        }
    }

    pub fn skipped(name: impl Into<String>, anchor: &str, expected: Value, reason: String) -> Self {
        Check {
            name: name.into(),
            paper_anchor: anchor.to_string(),
            status: Status::Skipped,
            expected,
            actual: Value::String(reason),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: Value,
    pub checks: Vec<Check>,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub suites: usize,
    pub checks: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: Value,
    pub summary: Summary,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn new(config: Value, suites: Vec<SuiteReport>) -> Self {
        let mut s = Summary {
            suites: suites.len(),
            ..Summary::default()
        };
        for c in suites.iter().flat_map(|r| &r.checks) {
            s.checks += 1;
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        Report {
            config,
            summary: s,
            suites,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// The report with runtimes zeroed, for determinism comparisons.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for s in &mut r.suites {
            s.runtime_ms = 0;
        }
        r
    }
}
