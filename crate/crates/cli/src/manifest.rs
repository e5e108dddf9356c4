//! Run manifests: enough provenance to reproduce or audit a sample file.

use std::path::{Path, PathBuf};

use bosonic_core::sampler::{BlockSummary, RunSummary};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    /// Canonical digest of the parsed config; independent of key order in
    /// the source file.
    pub config_hash: String,
    pub seed: u64,
    pub shots_requested: u64,
    pub shots_emitted: u64,
    pub shots_discarded: u64,
    /// Shots that drew the beyond-cutoff overflow outcome.
    pub overflow_hits: u64,
    /// Largest per-block probability mass past the enumeration cutoff.
    pub max_overflow_mass: f64,
    /// Per-block shot ranges and regime tags, in emission order.
    pub blocks: Vec<BlockSummary>,
    /// Files this run wrote, relative to the invocation directory.
    pub artifacts: Vec<String>,
}

impl RunManifest {
    pub fn new(config_hash: String, seed: u64, summary: &RunSummary, artifacts: Vec<String>) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash,
            seed,
            shots_requested: summary.shots_requested,
            shots_emitted: summary.shots_emitted,
            shots_discarded: summary.shots_discarded,
            overflow_hits: summary.overflow_hits,
            max_overflow_mass: summary.max_overflow_mass,
            blocks: summary.blocks.clone(),
            artifacts,
        }
    }

    pub fn to_json(&self) -> CliResult<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Numeric(format!("manifest serialization: {}", e)))
    }
}

/// `samples.jsonl` and `samples.jsonl.gz` both map to
/// `samples.manifest.json` beside the sample file.
pub fn manifest_path(sample_path: &Path) -> PathBuf {
    let mut p = sample_path.to_path_buf();
    if p.extension().is_some_and(|e| e == "gz") {
        p.set_extension("");
    }
    p.set_extension("manifest.json");
    p
}
