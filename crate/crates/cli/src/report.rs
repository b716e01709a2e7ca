//! The machine-readable result of one CLI run.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Field order is fixed by the struct; maps are sorted by key, so identical
/// inputs serialize to identical bytes. `timing_ms` is only filled on request.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            verdicts: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs.insert(key.to_string(), json!(v));
        self
    }

    pub fn output(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.outputs.insert(key.to_string(), json!(v));
        self
    }

    pub fn verdict(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.verdicts.push(Verdict { name: name.to_string(), pass, detail: detail.into() });
        self
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// A value with its error estimate.
pub fn estimate(z: Complex64, error: f64) -> Value {
    json!({ "value": complex(z), "error": error })
}
