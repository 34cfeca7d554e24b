use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// `Bound` passes when the error stays within tolerance; `Exhibit` passes when
/// the measured margin exceeds it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Bound,
    Exhibit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub kind: CheckKind,
    pub max_error: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckRecord {
    /// Builds a record; bound checks keep their witness only on failure.
    pub fn new(name: String, kind: CheckKind, measured: f64, tolerance: f64, witness: Option<Value>) -> CheckRecord {
        let pass = match kind {
            CheckKind::Bound => measured.is_finite() && measured <= tolerance,
            CheckKind::Exhibit => measured.is_finite() && measured > tolerance,
        };
        let status = if pass { Status::Pass } else { Status::Fail };
        let witness = match (status, kind) {
            (Status::Pass, CheckKind::Bound) => None,
            (Status::Pass, CheckKind::Exhibit) => witness,
            (Status::Fail, _) => Some(witness.unwrap_or_else(|| Value::String("no witness recorded".into()))),
        };
        CheckRecord { name, status, kind, max_error: measured, tolerance, witness }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub suites: Vec<String>,
    pub probe_seed: u64,
    pub step_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance_override: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<CheckRecord>,
    pub settings: Settings,
    pub runtime_seconds: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// One JSON object per check sorted by name, then a summary line.
    pub fn to_json_lines(&self) -> String {
        let mut checks: Vec<&CheckRecord> = self.checks.iter().collect();
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let mut out = String::new();
        for c in checks {
            out.push_str(&serde_json::to_string(c).expect("record serializes"));
            out.push('\n');
        }
        let summary = serde_json::json!({
            "summary": {
                "checks": self.checks.len(),
                "failed": self.failures().count(),
                "settings": self.settings,
                "runtime_seconds": self.runtime_seconds,
            }
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failure_keeps_witness() {
        let r = CheckRecord::new("x".into(), CheckKind::Bound, 1.0, 0.1, None);
        assert_eq!(r.status, Status::Fail);
        assert!(r.witness.is_some());
        let r = CheckRecord::new("x".into(), CheckKind::Bound, 0.01, 0.1, Some(Value::Null));
        assert!(r.passed() && r.witness.is_none());
        let r = CheckRecord::new("x".into(), CheckKind::Exhibit, 0.5, 1e-3, None);
        assert!(r.passed());
        let r = CheckRecord::new("x".into(), CheckKind::Bound, f64::NAN, 0.1, None);
        assert!(!r.passed());
    }

    #[test]
    fn lines_are_sorted() {
        let rec = |n: &str| CheckRecord::new(n.into(), CheckKind::Bound, 0.0, 1.0, None);
        let report = Report {
            checks: vec![rec("b"), rec("a")],
            settings: Settings { suites: vec![], probe_seed: 1, step_count: 16, tolerance_override: None },
            runtime_seconds: 0.0,
        };
        let text = report.to_json_lines();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].contains("\"a\"") && lines[1].contains("\"b\""));
    }
}
