//! Machine-readable verification reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A negative test that failed, as it should.
    Xfail,
    /// A negative test that unexpectedly held.
    Xpass,
}

impl Status {
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::Xfail)
    }
}

/// One verified identity: `{check_id, status, floor, witness?}`.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub check_id: String,
    pub status: Status,
    /// Truncation floor the identity was certified at, if truncation was involved.
    pub floor: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    /// Passes iff there is no counterexample.
    pub fn from_witness(id: &str, floor: Option<i32>, witness: Option<Value>) -> Self {
        let status = if witness.is_none() { Status::Pass } else { Status::Fail };
        Check { check_id: id.to_string(), status, floor, witness }
    }

    /// A negative test: the witness of failure is expected.
    pub fn expect_failure(id: &str, floor: Option<i32>, witness: Option<Value>) -> Self {
        let status = if witness.is_some() { Status::Xfail } else { Status::Xpass };
        Check { check_id: id.to_string(), status, floor, witness }
    }
}

/// Checks sorted by id.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        Report { checks }
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.status.is_ok())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per check, for humans.
    pub fn summary(&self) -> String {
        self.checks
            .iter()
            .map(|c| {
                let floor = c.floor.map_or(String::new(), |f| format!(" (floor {f})"));
                format!("{:<6} {}{}\n", format!("{:?}", c.status).to_lowercase(), c.check_id, floor)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn statuses_and_schema() {
        let r = Report::new(vec![
            Check::from_witness("b", Some(12), None),
            Check::expect_failure("a", None, Some(json!({"box": [0, 0]}))),
        ]);
        assert!(r.ok());
        assert_eq!(r.checks[0].check_id, "a");
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v[0]["status"], "xfail");
        assert_eq!(v[1], json!({"check_id": "b", "status": "pass", "floor": 12}));
        assert!(!Report::new(vec![Check::expect_failure("c", None, None)]).ok());
        assert!(!Report::new(vec![Check::from_witness("d", None, Some(json!(1)))]).ok());
    }
}
