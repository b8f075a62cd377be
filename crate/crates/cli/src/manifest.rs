use std::collections::BTreeMap;
use std::time::Duration;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// What is needed to reproduce a run, plus a digest of its result.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub config: Option<BTreeMap<String, String>>,
    pub seed: Option<u64>,
    pub budget: u64,
    pub wall_clock: Duration,
    /// SHA-256 of the compact JSON serialization of the result.
    pub output_sha256: String,
}

impl RunManifest {
    pub fn new(result: &Value, budget: u64, wall_clock: Duration) -> Self {
        RunManifest {
            command_line: std::env::args().collect(),
            config: None,
            seed: None,
            budget,
            wall_clock,
            output_sha256: digest(result),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command_line": self.command_line,
            "config": self.config,
            "versions": {
                "ffgaps": env!("CARGO_PKG_VERSION"),
            },
            "seed": self.seed,
            "budget": self.budget,
            "wall_clock_ms": self.wall_clock.as_secs_f64() * 1e3,
            "output_sha256": self.output_sha256,
        })
    }
}

pub fn digest(value: &Value) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable");
    Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
