//! Run metadata: what a command consumed and which RNG streams it used.
//!
//! Every command writes a `<command>.meta.json` next to its outputs. The
//! file names the derived random-stream labels (so any draw in the run can
//! be reproduced in isolation) and the SHA-256 of every input file, keyed
//! by the path exactly as configured. Deliberately absent: timestamps,
//! host names, and credentials — metadata must be byte-identical across
//! reruns of the same config and seed.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use crate::io::{sha256_hex, write_json_pretty};

/// One family of derived random streams, as a label pattern plus how many
/// instantiations of it the command used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    /// Label pattern, e.g. `"tournament-{index}"`.
    pub label: String,
    /// Number of streams instantiated from the pattern.
    pub streams: usize,
}

impl RngStream {
    pub fn new(label: impl Into<String>, streams: usize) -> Self {
        Self { label: label.into(), streams }
    }
}

/// Everything needed to audit one command invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    /// Subcommand name.
    pub command: String,
    /// Seed the run used after `--seed` resolution.
    pub seed: u64,
    /// Derived RNG streams, in the order the command opens them.
    pub rng_streams: Vec<RngStream>,
    /// SHA-256 per input file, keyed by the configured path.
    pub inputs: BTreeMap<String, String>,
}

impl RunMeta {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            seed,
            rng_streams: Vec::new(),
            inputs: BTreeMap::new(),
        }
    }

    /// Records one stream family.
    pub fn stream(mut self, label: impl Into<String>, streams: usize) -> Self {
        self.rng_streams.push(RngStream::new(label, streams));
        self
    }

    /// Hashes and records one input file, keyed by the path as given.
    /// Callers pass the path exactly as configured — never a resolved
    /// absolute path — so metadata compares equal across machines and
    /// output directories.
    pub fn input(self, path: &Path) -> Result<Self> {
        let key = path.display().to_string();
        self.input_named(key, path)
    }

    /// Hashes `path` but records it under `key`; for inputs that live in
    /// the output directory itself, where the key should be the stable
    /// artifact name rather than the run-specific resolved path.
    pub fn input_named(mut self, key: impl Into<String>, path: &Path) -> Result<Self> {
        self.inputs.insert(key.into(), sha256_hex(path)?);
        Ok(self)
    }

    /// Writes `<command>.meta.json` into the output directory.
    pub fn write(&self, out_dir: &Path) -> Result<()> {
        write_json_pretty(&out_dir.join(format!("{}.meta.json", self.command)), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meta_files_are_deterministic_and_named_by_command() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("pool.jsonl");
        std::fs::write(&input, "{}\n").unwrap();

        let meta = RunMeta::new("fit-bt", 42)
            .stream("tournament-{index}", 200)
            .input(&input)
            .unwrap();
        meta.write(dir.path()).unwrap();
        let first = std::fs::read(dir.path().join("fit-bt.meta.json")).unwrap();
        meta.write(dir.path()).unwrap();
        let second = std::fs::read(dir.path().join("fit-bt.meta.json")).unwrap();
        assert_eq!(first, second);

        let text = String::from_utf8(first).unwrap();
        assert!(text.contains("tournament-{index}"));
        assert!(text.contains("\"seed\": 42"));
    }
}
