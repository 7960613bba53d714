use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::Kind;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisFailed,
    InputError,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::HypothesisFailed => "hypothesis_failed",
            Status::InputError => "input_error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::HypothesisFailed => 2,
            Status::InputError => 3,
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub report_version: u32,
    pub tool: String,
    pub scenario: String,
    pub kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[i32; 2]>,
    pub status: Status,
    pub checks: Vec<Check>,
    pub tables: BTreeMap<String, serde_json::Value>,
    pub oracles: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(scenario: &str, kind: Kind, seed: Option<u64>, window: Option<[i32; 2]>) -> Self {
        Report {
            report_version: REPORT_VERSION,
            tool: concat!("parahiggs ", env!("CARGO_PKG_VERSION")).into(),
            scenario: scenario.into(),
            kind,
            seed,
            window,
            status: Status::Pass,
            checks: Vec::new(),
            tables: BTreeMap::new(),
            oracles: Vec::new(),
            error: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.status = self.status.max(status);
        self.checks.push(Check { name: name.into(), status, detail: detail.into() });
    }

    pub fn table(&mut self, name: &str, value: impl Serialize) {
        self.tables.insert(name.into(), serde_json::to_value(value).expect("tables serialize"));
    }

    pub fn oracle(&mut self, s: &str) {
        self.oracles.push(s.into());
    }

    pub fn fail_with(&mut self, status: Status, error: String) {
        self.status = self.status.max(status);
        self.error = Some(error);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {} ({})", self.scenario, self.kind.as_str());
        let _ = writeln!(out, "status: {}", self.status.as_str());
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        if let Some([d1, d2]) = self.window {
            let _ = writeln!(out, "window: {d1} {d2}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "  [{}] {}: {}", c.status.as_str(), c.name, c.detail);
        }
        for (name, v) in &self.tables {
            let _ = writeln!(out, "table {name}: {v}");
        }
        for o in &self.oracles {
            let _ = writeln!(out, "oracle: {o}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        out
    }
}
