use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Everything needed to rerun a command and check that it reproduces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, as given.
    pub argv: Vec<String>,
    pub parameters: Value,
    pub seed: u64,
    pub constants: Constants,
    /// SHA-256 of every input file, keyed by path.
    pub inputs: BTreeMap<String, String>,
    pub measured: Value,
    pub verdicts: BTreeMap<String, bool>,
    /// SHA-256 of the compact JSON result.
    pub output_sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Congestion constant of the almost-embedding guarantee.
    pub embed: f64,
    /// Congestion constant of the model-extraction guarantee.
    pub extract: f64,
    pub separator: f64,
    pub gamma_override: Option<f64>,
    pub eps: f64,
    pub resample_cap: Option<u64>,
    pub leaf_size: usize,
    pub embed_retries: u32,
}

impl RunManifest {
    pub fn all_verified(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn digest_value(v: &Value) -> String {
    sha256_hex(v.to_string().as_bytes())
}

pub fn digest_file(path: &Path) -> std::io::Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}
