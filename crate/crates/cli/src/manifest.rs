use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Record of one invocation. Two runs with equal manifests (ignoring the
/// checksum) produce byte-identical output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub version: String,
    /// SHA-256 of the primary output, hex-encoded.
    pub output_sha256: String,
}

impl RunManifest {
    pub fn new(
        command: &str,
        parameters: BTreeMap<String, String>,
        seed: Option<u64>,
        output: &[u8],
    ) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            output_sha256: hex::encode(Sha256::digest(output)),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}
