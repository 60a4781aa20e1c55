//! Output plumbing shared by the subcommands: atomic file writes, the run
//! manifest, and environment-controlled knobs.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use qsc_core::error::Error;
use qsc_core::f2code::DEFAULT_MAX_ENUM_DIM;

/// Enumeration-dimension guard, overridable via QSC_MAX_ENUM_DIM.
pub fn enum_guard() -> usize {
    std::env::var("QSC_MAX_ENUM_DIM")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_ENUM_DIM)
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Write via a temporary sibling and rename, so readers never observe a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> qsc_core::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).map_err(|e| io_err(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> qsc_core::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Record of one run: command line, input digests, tool version and the
/// files produced. Identical inputs and version give a byte-identical
/// manifest.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub version: String,
    pub inputs: Vec<ManifestInput>,
    pub outputs: Vec<String>,
}

#[derive(Serialize)]
pub struct ManifestInput {
    pub path: String,
    pub sha256: String,
}

impl RunManifest {
    pub fn new() -> RunManifest {
        RunManifest {
            command: std::env::args().collect(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn record_input(&mut self, path: &Path) -> qsc_core::Result<()> {
        let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push(ManifestInput {
            path: path.display().to_string(),
            sha256: hex,
        });
        Ok(())
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn write(&self, path: &Path) -> qsc_core::Result<()> {
        write_json(path, self)
    }
}
