use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// One numerical probe and the value it produced. Non-finite values
/// serialize as JSON `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub probe: String,
    pub value: Option<f64>,
}

/// Verdict of a single hypothesis check together with the numbers behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
    pub thresholds_used: BTreeMap<String, f64>,
    pub notes: String,
}

impl CheckReport {
    pub fn new(check_name: impl Into<String>) -> Self {
        Self {
            check_name: check_name.into(),
            verdict: Verdict::Inconclusive,
            evidence: Vec::new(),
            thresholds_used: BTreeMap::new(),
            notes: String::new(),
        }
    }

    pub fn push(&mut self, probe: impl Into<String>, value: f64) {
        self.evidence.push(Evidence {
            probe: probe.into(),
            value: value.is_finite().then_some(value),
        });
    }

    pub fn threshold(&mut self, name: impl Into<String>, value: f64) {
        self.thresholds_used.insert(name.into(), value);
    }

    pub fn note(&mut self, text: impl AsRef<str>) {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
    }

    /// First evidence value recorded under `probe`.
    pub fn value(&self, probe: &str) -> Option<f64> {
        self.evidence
            .iter()
            .find(|e| e.probe == probe)
            .and_then(|e| e.value)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializes_with_lowercase_verdict_and_null_for_infinite() {
        let mut r = CheckReport::new("demo");
        r.verdict = Verdict::Fail;
        r.push("a", 1.5);
        r.push("b", f64::INFINITY);
        r.threshold("tol", 1e-3);
        r.note("first");
        r.note("second");
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"verdict\":\"fail\""));
        assert!(json.contains("\"value\":null"));
        assert!(json.contains("\"thresholds_used\":{\"tol\":0.001}"));
        assert_eq!(r.notes, "first; second");
        let back: CheckReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.value("a"), Some(1.5));
        assert_eq!(r.value("b"), None);
    }
}
