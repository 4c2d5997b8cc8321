//! Machine-readable report envelope (JSON schema v1).
//!
//! Reports are deterministic for a given command line and seed: inputs echo
//! verbatim, results serialize through fixed-order structs, and wall-clock
//! timing is opt-in (it is the one field that would break byte-identical
//! reruns, so it stays null unless explicitly requested).

use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: String,
    pub seed: u64,
    pub inputs: serde_json::Value,
    pub results: serde_json::Value,
    pub timings_ms: Option<u64>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64, inputs: serde_json::Value, results: serde_json::Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            seed,
            inputs,
            results,
            timings_ms: None,
            warnings: Vec::new(),
        }
    }

    pub fn with_timing(mut self, ms: u64) -> Self {
        self.timings_ms = Some(ms);
        self
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_shape() {
        let mut r = Report::new(
            "distance",
            42,
            serde_json::json!({"weight": "hyperbolic"}),
            serde_json::json!({"value": 0.5}),
        );
        r.warn("example warning");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema_version"], "1");
        assert_eq!(v["command"], "distance");
        assert_eq!(v["seed"], 42);
        assert!(v["timings_ms"].is_null());
        assert_eq!(v["warnings"][0], "example warning");
    }

    #[test]
    fn same_inputs_same_bytes() {
        let a = Report::new("x", 7, serde_json::json!({"k": 1}), serde_json::json!({"v": [1.5, 2.5]}));
        let b = Report::new("x", 7, serde_json::json!({"k": 1}), serde_json::json!({"v": [1.5, 2.5]}));
        assert_eq!(a.to_json(), b.to_json());
    }
}
