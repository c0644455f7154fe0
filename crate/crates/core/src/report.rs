//! Status values and the envelope every CLI command prints.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Incomplete,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Fail beats incomplete beats pass.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Incomplete, _) | (_, Incomplete) => Incomplete,
            _ => Pass,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Incomplete => "incomplete",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub parameters: serde_json::Value,
    pub status: Status,
    pub payload: serde_json::Value,
    pub timing: Timing,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_statuses() {
        assert_eq!(Status::Pass.combine(Status::Pass), Status::Pass);
        assert_eq!(Status::Pass.combine(Status::Incomplete), Status::Incomplete);
        assert_eq!(Status::Incomplete.combine(Status::Fail), Status::Fail);
        assert_eq!(serde_json::to_string(&Status::Fail).unwrap(), "\"fail\"");
    }
}
