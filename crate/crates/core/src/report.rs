//! Verification records shared by every check suite and the CLI.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    DiscrepancyDocumented,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub paper_eq: String,
    pub status: Status,
    pub mode: Option<i64>,
    pub engine_value: String,
    pub expected_value: String,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, paper_eq: impl Into<String>, status: Status) -> Self {
        Self {
            id: id.into(),
            paper_eq: paper_eq.into(),
            status,
            mode: None,
            engine_value: String::new(),
            expected_value: String::new(),
            seconds: 0.0,
            note: None,
        }
    }

    pub fn pass_fail(id: impl Into<String>, paper_eq: impl Into<String>, ok: bool) -> Self {
        Self::new(id, paper_eq, if ok { Status::Pass } else { Status::Fail })
    }

    pub fn at_mode(mut self, mode: Option<i64>) -> Self {
        self.mode = mode;
        self
    }

    pub fn values(mut self, engine: impl Into<String>, expected: impl Into<String>) -> Self {
        self.engine_value = engine.into();
        self.expected_value = expected.into();
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Runs `f` and stamps every record it returns with the elapsed time.
pub fn timed<F: FnOnce() -> Vec<CheckRecord>>(f: F) -> Vec<CheckRecord> {
    let start = Instant::now();
    let mut out = f();
    let secs = start.elapsed().as_secs_f64();
    for r in out.iter_mut() {
        r.seconds = secs;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub window: usize,
    pub checks: Vec<CheckRecord>,
    /// Wall-clock seconds per suite.
    #[serde(default)]
    pub durations: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(scenario: impl Into<String>, window: usize) -> Self {
        Self { scenario: scenario.into(), window, checks: Vec::new(), durations: BTreeMap::new() }
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = CheckRecord>) {
        self.checks.extend(records);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// The report with every timing zeroed, for comparing runs.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        for c in r.checks.iter_mut() {
            c.seconds = 0.0;
        }
        for v in r.durations.values_mut() {
            *v = 0.0;
        }
        r
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn find(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }
}
