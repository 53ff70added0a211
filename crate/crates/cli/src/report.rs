//! Suite reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sigma_lab::AuditReport;

/// Witnesses kept per check.
pub const WITNESS_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct CheckRecord {
    pub check_id: String,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub witnesses: Vec<Value>,
    /// Seconds.
    pub wall_time: f64,
}

impl CheckRecord {
    pub fn from_audit(check_id: &str, audit: AuditReport, wall_time: f64) -> CheckRecord {
        let failed = audit.failed();
        let witnesses = audit
            .failures
            .into_iter()
            .take(WITNESS_LIMIT)
            .map(|f| {
                serde_json::json!({
                    "instance": f.instance,
                    "verdict": f.verdict,
                    "witness": f.witness,
                })
            })
            .collect();
        CheckRecord {
            check_id: check_id.into(),
            instances: audit.instances,
            passed: audit.passed,
            failed,
            witnesses,
            wall_time,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct Report {
    pub verdict: String,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(checks: Vec<CheckRecord>) -> Report {
        let verdict = if checks.iter().all(CheckRecord::ok) { "pass" } else { "fail" };
        Report {
            verdict: verdict.into(),
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    /// The report with every `wallTime` zeroed, for comparisons.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.wall_time = 0.0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out += &format!(
                "{:<16} {:>4} {:>8} instances {:>8} passed {:>4} failed {:>8.2}s\n",
                c.check_id,
                if c.ok() { "ok" } else { "FAIL" },
                c.instances,
                c.passed,
                c.failed,
                c.wall_time
            );
            for w in &c.witnesses {
                out += &format!("    {}\n", w["verdict"].as_str().unwrap_or(""));
            }
        }
        out += &format!("verdict: {}\n", self.verdict);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_passes() {
        let r = Report::new(vec![]);
        assert!(r.passed());
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn failures_carry_witnesses() {
        let mut a = AuditReport::new("x");
        a.pass();
        a.fail("bad", serde_json::json!({"pair": [0, 1]}));
        let c = CheckRecord::from_audit("x", a, 0.0);
        assert_eq!((c.instances, c.passed, c.failed), (2, 1, 1));
        assert_eq!(c.witnesses.len(), 1);
        assert!(!Report::new(vec![c]).passed());
    }
}
