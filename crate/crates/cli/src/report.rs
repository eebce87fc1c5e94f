//! Machine-readable run reports.

use std::collections::BTreeMap;

use dfchar::characters::Check;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// The outcome of one command: inputs, results, residuals and named checks.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub residuals: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub wall_time_ms: Option<u128>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport { command: command.into(), ..Default::default() }
    }

    pub fn input(&mut self, key: &str, value: Value) {
        self.inputs.insert(key.into(), value);
    }

    pub fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.into(), value);
    }

    /// Keeps the largest residual seen under `key`.
    pub fn residual(&mut self, key: &str, value: f64) {
        let e = self.residuals.entry(key.into()).or_insert(0.0);
        *e = e.max(value);
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn inputs_digest(&self) -> String {
        let canonical = serde_json::to_string(&Value::Object(self.inputs.clone())).expect("inputs serialize");
        sha256_hex(canonical.as_bytes())
    }

    pub fn to_json(&self) -> Value {
        let mut doc = json!({
            "command": self.command,
            "inputs": self.inputs,
            "inputs_digest": self.inputs_digest(),
            "results": self.results,
            "residuals": self.residuals,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "passed": self.passed(),
        });
        if let Some(ms) = self.wall_time_ms {
            doc["wall_time_ms"] = json!(ms);
        }
        doc
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# {}\n\n", self.command);
        if !self.results.is_empty() {
            let body = serde_json::to_string_pretty(&Value::Object(self.results.clone())).expect("results serialize");
            out.push_str(&format!("## Results\n\n```json\n{body}\n```\n\n"));
        }
        if !self.residuals.is_empty() {
            out.push_str("## Residuals\n\n| quantity | max |\n|---|---|\n");
            for (k, v) in &self.residuals {
                out.push_str(&format!("| {k} | {v:e} |\n"));
            }
            out.push('\n');
        }
        if !self.checks.is_empty() {
            out.push_str("## Checks\n\n");
            for c in &self.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("- {mark} {}: {}\n", c.name, c.detail));
            }
            out.push('\n');
        }
        out.push_str(&format!("passed: {}\n", self.passed()));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,passed,detail\n");
        for c in &self.checks {
            out.push_str(&format!("{},{},{}\n", csv_field(&c.name), c.passed, csv_field(&c.detail)));
        }
        out
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_ignores_insertion_order() {
        let mut a = RunReport::new("x");
        a.input("space", json!("torus"));
        a.input("seed", json!(0));
        let mut b = RunReport::new("x");
        b.input("seed", json!(0));
        b.input("space", json!("torus"));
        assert_eq!(a.inputs_digest(), b.inputs_digest());
        assert_eq!(serde_json::to_string(&a.to_json()).unwrap(), serde_json::to_string(&b.to_json()).unwrap());
    }

    #[test]
    fn timing_only_when_requested() {
        let mut r = RunReport::new("x");
        assert!(r.to_json().get("wall_time_ms").is_none());
        r.wall_time_ms = Some(3);
        assert_eq!(r.to_json()["wall_time_ms"], json!(3));
    }
}
