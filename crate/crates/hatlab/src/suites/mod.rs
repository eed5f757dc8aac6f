//! Lemma verification suites behind `hatlab verify`.
//!
//! Each suite runs a seeded, deterministic batch of checks and returns one
//! pass/fail case per criterion plus optional CSV rows for the report files.

use serde_json::{json, Value};

pub mod ball_oracle;
pub mod cone2;
pub mod conti;
pub mod hat_bound;
pub mod hat_stability;
pub mod infty;
pub mod schacht;

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

impl CaseResult {
    pub fn new(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        CaseResult { id: id.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport {
            suite: suite.into(),
            cases: Vec::new(),
            csv_header: Vec::new(),
            csv_rows: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn push(&mut self, case: CaseResult) {
        self.cases.push(case);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "cases": self.cases.iter().map(|c| json!({
                "id": c.id,
                "pass": c.pass,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Corpus scale knob: `quick` trims trial counts for smoke runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

impl Scale {
    pub fn trials(&self, full: usize) -> usize {
        match self {
            Scale::Full => full,
            Scale::Quick => (full / 10).max(4),
        }
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "hat-stability",
    "conti",
    "schacht",
    "cone2",
    "infty",
    "hat-bound",
    "ball-oracle",
    "all",
];

/// Dispatches a suite by CLI name.
pub fn run_suite(name: &str, seed: u64, scale: Scale) -> anyhow::Result<Vec<SuiteReport>> {
    let single = |r: SuiteReport| Ok(vec![r]);
    match name {
        "ball-oracle" => single(ball_oracle::run(scale)),
        "hat-stability" => single(hat_stability::run(seed, scale)),
        "conti" => single(conti::run(seed, scale)),
        "schacht" => single(schacht::run(seed, scale)),
        "cone2" => single(cone2::run(seed, scale)),
        "infty" => single(infty::run(scale)),
        "hat-bound" => single(hat_bound::run(scale)),
        "all" => Ok(vec![
            ball_oracle::run(scale),
            hat_stability::run(seed, scale),
            conti::run(seed, scale),
            schacht::run(seed, scale),
            cone2::run(seed, scale),
            infty::run(scale),
            hat_bound::run(scale),
        ]),
        other => anyhow::bail!("unknown suite {other:?}; expected one of {SUITE_NAMES:?}"),
    }
}
