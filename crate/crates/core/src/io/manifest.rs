//! Per-command manifest, written after every other artifact.
//!
//! The only non-deterministic output: it records wall-clock figures.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub tool_version: String,
    pub seed: u64,
    /// Seconds since the Unix epoch at start.
    pub started_unix: f64,
    pub wall_clock_seconds: f64,
    /// Paths relative to the output directory, in write order.
    pub files: Vec<PathBuf>,
    pub passed: bool,
    pub exit_code: i32,
    pub summary: Value,
}

/// Collects file paths and timing while a command runs.
pub struct ManifestBuilder {
    command: String,
    config_hash: String,
    seed: u64,
    started_unix: f64,
    clock: Instant,
    files: Vec<PathBuf>,
}

impl ManifestBuilder {
    pub fn start(command: &str, config_hash: String, seed: u64) -> Self {
        let started_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs_f64())
            .unwrap_or(0.0);
        ManifestBuilder {
            command: command.to_string(),
            config_hash,
            seed,
            started_unix,
            clock: Instant::now(),
            files: Vec::new(),
        }
    }

    pub fn add_file(&mut self, rel: impl Into<PathBuf>) {
        self.files.push(rel.into());
    }

    pub fn finish(self, passed: bool, exit_code: i32, summary: Value) -> RunManifest {
        RunManifest {
            command: self.command,
            config_hash: self.config_hash,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: self.seed,
            started_unix: self.started_unix,
            wall_clock_seconds: self.clock.elapsed().as_secs_f64(),
            files: self.files,
            passed,
            exit_code,
            summary,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
