//! Run manifests and configuration hashing.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, EXIT_INVARIANT, EXIT_NON_CONVERGENCE};
use crate::output::{to_json_bytes, write_if_changed};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MANIFEST_FILE: &str = "manifest.json";

/// SHA-256 of the compact JSON encoding, hex.
pub fn hash_json<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("value serializes");
    Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskStatus {
    Ok,
    NonConverged,
    InvariantFailed,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub id: String,
    pub task_hash: String,
    pub status: TaskStatus,
    /// Paths relative to the manifest's directory.
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Scalar results reused by tables when the task is skipped on resume.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub config_hash: String,
    pub tasks: Vec<TaskRecord>,
    /// Files written after all tasks, such as combined tables.
    #[serde(default)]
    pub tables: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, config_hash: String) -> Self {
        RunManifest {
            tool_version: TOOL_VERSION.to_string(),
            command: command.into(),
            config_hash,
            tasks: Vec::new(),
            tables: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &TaskRecord> {
        self.tasks.iter().filter(|t| t.status != TaskStatus::Ok)
    }

    pub fn succeeded(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn exit_code(&self) -> i32 {
        let statuses: Vec<TaskStatus> = self.failures().map(|t| t.status).collect();
        if statuses.is_empty() {
            0
        } else if statuses.contains(&TaskStatus::InvariantFailed) {
            EXIT_INVARIANT
        } else if statuses.contains(&TaskStatus::NonConverged) {
            EXIT_NON_CONVERGENCE
        } else {
            1
        }
    }

    /// Same manifest with every wall time zeroed.
    pub fn without_timing(&self) -> RunManifest {
        let mut m = self.clone();
        for t in &mut m.tasks {
            t.wall_time_s = 0.0;
        }
        m
    }

    /// Outputs of successful tasks that are missing or empty under `dir`.
    pub fn missing_outputs(&self, dir: &Path) -> Vec<String> {
        self.tasks
            .iter()
            .filter(|t| t.status == TaskStatus::Ok)
            .flat_map(|t| t.outputs.iter())
            .chain(self.tables.iter())
            .filter(|o| {
                std::fs::metadata(dir.join(o))
                    .map(|m| m.len() == 0)
                    .unwrap_or(true)
            })
            .cloned()
            .collect()
    }

    pub fn load(dir: &Path) -> Option<RunManifest> {
        crate::output::read_json(&dir.join(MANIFEST_FILE)).ok()
    }

    /// Writes `manifest.json` into `dir` unless identical bytes are there.
    pub fn write(&self, dir: &Path) -> Result<bool> {
        write_if_changed(&dir.join(MANIFEST_FILE), &to_json_bytes(self))
    }
}
