use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Record of one invocation. Contains no timestamps, so identical inputs
/// and parameters give identical bytes.
#[derive(Debug, Default, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    pub parameters: BTreeMap<String, String>,
    pub verdicts: BTreeMap<String, Value>,
    pub tool_version: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            ..Default::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn verdict(&mut self, key: &str, value: impl Into<Value>) {
        self.verdicts.insert(key.to_string(), value.into());
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.insert(path.display().to_string(), sha256_hex(bytes));
    }

    pub fn output(&mut self, path: &Path, bytes: &[u8]) {
        self.outputs.insert(path.display().to_string(), sha256_hex(bytes));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}
