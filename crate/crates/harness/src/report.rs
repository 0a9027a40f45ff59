//! Suite reports. Everything except [`Report::timing`] is a deterministic
//! function of the configuration and seed.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Held, but below the target precision while above the suite floor.
    PrecisionLimited,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub name: String,
    pub status: Status,
    /// Digits achieved, when the check is a congruence.
    pub precision: Option<i64>,
    pub floor: Option<i64>,
    pub detail: String,
}

impl CaseReport {
    pub fn check(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        CaseReport {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            precision: None,
            floor: None,
            detail: detail.into(),
        }
    }

    /// Pass at `target` digits, precision-limited between `floor` and
    /// `target`, failure below `floor`.
    pub fn precision(
        name: impl Into<String>,
        achieved: i64,
        target: i64,
        floor: i64,
        detail: impl Into<String>,
    ) -> Self {
        let status = if achieved >= target {
            Status::Pass
        } else if achieved >= floor {
            Status::PrecisionLimited
        } else {
            Status::Fail
        };
        CaseReport { name: name.into(), status, precision: Some(achieved), floor: Some(floor), detail: detail.into() }
    }

    pub fn at_precision(mut self, digits: impl Into<i64>) -> Self {
        self.precision = Some(digits.into());
        self
    }

    pub fn error(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self::check(name, false, format!("error: {err}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suites: Vec<SuiteReport>,
    /// Wall-clock seconds per suite; the only nondeterministic field.
    pub timing: BTreeMap<String, f64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The JSON of everything except the timing field.
    pub fn deterministic_json(&self) -> String {
        serde_json::to_string_pretty(&self.suites).expect("report serializes")
    }
}
