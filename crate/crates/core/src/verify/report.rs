use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub max_abs_error: f64,
    pub tolerance: f64,
    /// `max_abs_error <= tolerance`; informational when `exploratory`.
    pub passed: bool,
    pub wall_time_ms: f64,
    #[serde(default)]
    pub exploratory: bool,
}

impl CheckReport {
    /// A check that counts towards overall success.
    pub fn gated(name: impl Into<String>, max_abs_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
            max_abs_error,
            tolerance,
            // NaN never passes
            passed: max_abs_error <= tolerance,
            wall_time_ms: 0.0,
            exploratory: false,
        }
    }

    /// A check whose outcome is recorded but never gates.
    pub fn exploratory(name: impl Into<String>, max_abs_error: f64, tolerance: f64) -> Self {
        Self { exploratory: true, ..Self::gated(name, max_abs_error, tolerance) }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl Into<Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn with_time_ms(mut self, ms: f64) -> Self {
        self.wall_time_ms = ms;
        self
    }

    /// Whether this check makes the run fail.
    pub fn fails_run(&self) -> bool {
        !self.exploratory && !self.passed
    }

    /// Ordering key: name, then the serialized parameters.
    pub fn sort_key(&self) -> (String, String) {
        (self.name.clone(), serde_json::to_string(&self.params).unwrap_or_default())
    }
}

/// Full report of a `verify` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Vec<String>,
    pub config: Value,
    pub checks: Vec<CheckReport>,
    pub passed: bool,
}

impl Report {
    pub fn new(suite: Vec<String>, config: Value, mut checks: Vec<CheckReport>) -> Self {
        checks.sort_by_key(CheckReport::sort_key);
        let passed = checks.iter().all(|c| !c.fails_run());
        Self { suite, config, checks, passed }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gating_rules() {
        assert!(CheckReport::gated("a", 1e-12, 1e-10).passed);
        assert!(!CheckReport::gated("a", f64::NAN, 1e-10).passed);
        let e = CheckReport::exploratory("b", 1.0, 1e-6);
        assert!(!e.passed && !e.fails_run());
        let r = Report::new(vec![], Value::Null, vec![e, CheckReport::gated("a", 0.0, 1.0)]);
        assert!(r.passed);
        assert_eq!(r.checks[0].name, "a");
        let r = Report::new(vec![], Value::Null, vec![CheckReport::gated("c", 2.0, 1.0)]);
        assert!(!r.passed);
    }

    #[test]
    fn serializes_all_fields() {
        let c = CheckReport::gated("x", 0.5, 1.0).with_param("s", 0.5).with_time_ms(3.0);
        let v: Value = serde_json::to_value(&c).unwrap();
        for key in ["name", "params", "max_abs_error", "tolerance", "passed", "wall_time_ms"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let back: CheckReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }
}
