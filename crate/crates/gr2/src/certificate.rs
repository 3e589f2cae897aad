//! Machine-readable certificates for verification runs.
//!
//! Schema (version 1): `{command, genus, parameters, result, details,
//! artifact_version, seed, timing_ms}`. Certificates are byte-identical
//! across thread counts except for `timing_ms`; lattice digests are hex
//! SHA-256 over the canonical HNF serialization, so cross-machine
//! comparison is a string compare.

use serde::Serialize;

pub const ARTIFACT_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Serialize)]
pub struct Certificate {
    pub command: String,
    pub genus: u32,
    pub parameters: serde_json::Map<String, serde_json::Value>,
    pub result: Outcome,
    pub details: serde_json::Value,
    pub artifact_version: String,
    pub seed: u64,
    pub timing_ms: u128,
}

impl Certificate {
    pub fn new(command: impl Into<String>, genus: u32, seed: u64) -> Self {
        Certificate {
            command: command.into(),
            genus,
            parameters: serde_json::Map::new(),
            result: Outcome::Pass,
            details: serde_json::Value::Null,
            artifact_version: ARTIFACT_VERSION.to_string(),
            seed,
            timing_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.result == Outcome::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// The JSON with the timing field zeroed, for byte-identity comparisons.
    pub fn timing_invariant_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("certificate serializes");
        v["timing_ms"] = serde_json::Value::from(0u64);
        serde_json::to_string_pretty(&v).expect("certificate serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "[{}] {} (genus {})\n",
            match self.result {
                Outcome::Pass => "pass",
                Outcome::Fail => "FAIL",
                Outcome::Error => "ERROR",
            },
            self.command,
            self.genus
        ));
        if !self.parameters.is_empty() {
            out.push_str(&format!(
                "  parameters: {}\n",
                serde_json::Value::Object(self.parameters.clone())
            ));
        }
        if !self.details.is_null() {
            out.push_str(&format!("  details: {}\n", self.details));
        }
        out.push_str(&format!("  time: {} ms\n", self.timing_ms));
        out
    }
}
