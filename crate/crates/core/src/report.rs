//! Audit reports: per-instance verdicts with reproducible witnesses.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One failed instance of an audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Failure {
    pub instance: usize,
    pub verdict: String,
    pub witness: Value,
}

/// Outcome of running a check over a finite instance set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditReport {
    pub check: String,
    pub instances: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
}

impl AuditReport {
    pub fn new(check: impl Into<String>) -> Self {
        AuditReport {
            check: check.into(),
            instances: 0,
            passed: 0,
            failures: Vec::new(),
        }
    }

    /// Records one instance; the witness is only built on failure.
    pub fn record(&mut self, ok: bool, verdict: impl FnOnce() -> String, witness: impl FnOnce() -> Value) {
        let instance = self.instances;
        self.instances += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(Failure {
                instance,
                verdict: verdict(),
                witness: witness(),
            });
        }
    }

    pub fn pass(&mut self) {
        self.record(true, String::new, || Value::Null);
    }

    pub fn fail(&mut self, verdict: impl Into<String>, witness: Value) {
        let verdict = verdict.into();
        self.record(false, || verdict, || witness);
    }

    pub fn failed(&self) -> usize {
        self.failures.len()
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Appends the instances of `other`, renumbering them after ours.
    pub fn absorb(&mut self, other: AuditReport) {
        let offset = self.instances;
        self.instances += other.instances;
        self.passed += other.passed;
        self.failures.extend(other.failures.into_iter().map(|mut f| {
            f.instance += offset;
            f
        }));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_merge() {
        let mut a = AuditReport::new("a");
        a.pass();
        a.fail("bad", Value::from(3));
        let mut b = AuditReport::new("b");
        b.fail("worse", Value::from(4));
        a.absorb(b);
        assert_eq!(a.instances, 3);
        assert_eq!(a.passed, 1);
        assert_eq!(a.failures[1].instance, 2);
        assert!(!a.ok());
    }
}
