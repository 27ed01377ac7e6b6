//! Run manifests: what was run, on which inputs, and what it wrote.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub struct Manifest {
    pub input: Option<PathBuf>,
    pub command: String,
    pub config: Value,
    pub outputs: Vec<PathBuf>,
    pub stamp: bool,
}

/// SHA-256 of every regular file in `dir`, by file name.
fn input_digests(dir: &Path) -> Result<Vec<(String, String)>> {
    let mut digests = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let entry = entry?;
        if entry.file_type()?.is_file() {
            let bytes = fs::read(entry.path())?;
            digests.push((
                entry.file_name().to_string_lossy().into_owned(),
                hex::encode(Sha256::digest(&bytes)),
            ));
        }
    }
    digests.sort();
    Ok(digests)
}

impl Manifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let inputs = match &self.input {
            Some(dir) => input_digests(dir)?,
            None => Vec::new(),
        };
        let hashed = json!({
            "command": self.command,
            "config": self.config,
            "inputs": inputs,
        });
        let config_hash = hex::encode(Sha256::digest(hashed.to_string().as_bytes()));

        let mut doc = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "tool_version": env!("CARGO_PKG_VERSION"),
            "input_dir": self.input.as_ref().map(|p| p.display().to_string()),
            "commands": [self.command],
            "config": self.config,
            "config_hash": config_hash,
            "outputs": self.outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        });
        if self.stamp {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            doc["generated_at_unix"] = json!(secs);
        }
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }
}
