use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// One parameter set of a suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: String,
    pub status: Status,
    pub summary: String,
    /// Betti tables, certificate checks and similar evidence.
    pub witness: serde_json::Value,
}

impl CaseResult {
    pub fn error(id: String, e: impl std::fmt::Display) -> Self {
        CaseResult {
            id,
            status: Status::Fail,
            summary: format!("error: {e}"),
            witness: serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub status: Status,
    pub cases: Vec<CaseResult>,
    /// Only filled in with `--timing`, so that reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl VerifyReport {
    pub fn new(suite: &str, cases: Vec<CaseResult>) -> Self {
        let status = if cases.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
        VerifyReport {
            suite: suite.to_string(),
            status,
            cases,
            wall_time_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn count(&self, s: Status) -> usize {
        self.cases.iter().filter(|c| c.status == s).count()
    }
}
