//! Outcome of a verification check.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub scope: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Extra structured output (normal-form data, sizes, found conventions).
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub details: BTreeMap<String, serde_json::Value>,
    /// Wall-clock time; only filled when timing is requested, so that reports
    /// stay byte-identical across runs by default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl CheckReport {
    pub fn new(name: &str, scope: impl Into<String>, counterexample: Option<Counterexample>) -> Self {
        CheckReport {
            name: name.to_string(),
            passed: counterexample.is_none(),
            scope: scope.into(),
            counterexample,
            details: BTreeMap::new(),
            millis: None,
        }
    }

    pub fn pass(name: &str, scope: impl Into<String>) -> Self {
        Self::new(name, scope, None)
    }

    pub fn fail(name: &str, scope: impl Into<String>, cx: Counterexample) -> Self {
        Self::new(name, scope, Some(cx))
    }

    pub fn with_detail(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    /// Conjunction of several sub-reports under one name; the first failure
    /// wins.
    pub fn merge(name: &str, parts: Vec<CheckReport>) -> Self {
        let scope = parts
            .iter()
            .map(|p| format!("{}: {}", p.name, p.scope))
            .collect::<Vec<_>>()
            .join("; ");
        let cx = parts.iter().find_map(|p| {
            p.counterexample.as_ref().map(|c| Counterexample {
                inputs: format!("[{}] {}", p.name, c.inputs),
                lhs: c.lhs.clone(),
                rhs: c.rhs.clone(),
            })
        });
        let mut out = Self::new(name, scope, cx);
        for p in parts {
            for (k, v) in p.details {
                out.details.insert(format!("{}.{}", p.name, k), v);
            }
        }
        out
    }
}

pub fn cx(inputs: impl Into<String>, lhs: impl ToString, rhs: impl ToString) -> Counterexample {
    Counterexample {
        inputs: inputs.into(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// Runs `f`, storing its wall-clock time in the report when `timed`.
pub fn timed(timed: bool, f: impl FnOnce() -> CheckReport) -> CheckReport {
    let start = Instant::now();
    let mut r = f();
    if timed {
        r.millis = Some(start.elapsed().as_millis() as u64);
    }
    r
}
