//! Run manifests.
//!
//! Every CLI command writes a manifest next to its outputs. Anything
//! time-dependent (timestamps, wall-clock durations) belongs here and only
//! here, so the data files themselves stay byte-identical across
//! equal-seed reruns.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    /// The CLI invocation, reconstructed from parsed arguments.
    pub command: String,
    pub seed: u64,
    pub version: String,
    /// Unix timestamp (seconds) when the command finished.
    pub unix_time: u64,
    /// Total wall-clock seconds spent.
    pub wall_time: f64,
    /// Files the command wrote, relative or absolute as given.
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: String, seed: u64, wall_time: f64, outputs: Vec<String>) -> Self {
        let unix_time = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            unix_time,
            wall_time,
            outputs,
        }
    }

    /// Manifest path for a given output file: `<output>.manifest.json`.
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        output.with_file_name(name)
    }

    pub fn save_for(&self, output: &Path) -> Result<()> {
        let path = Self::path_for(output);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_path_sits_next_to_output() {
        let p = Manifest::path_for(Path::new("/tmp/out/scan.csv"));
        assert_eq!(p, Path::new("/tmp/out/scan.csv.manifest.json"));
    }

    #[test]
    fn manifest_round_trips() {
        let m = Manifest::new("garden solve".into(), 7, 1.5, vec!["samples.json".into()]);
        let text = serde_json::to_string(&m).unwrap();
        let back: Manifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back.seed, 7);
        assert_eq!(back.command, "garden solve");
    }
}
