//! Run manifests and atomic output directories.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputFile {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// Everything needed to re-run a subcommand. Contains no timestamps, so
/// repeated runs produce identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub subcommand: String,
    pub inputs: Vec<InputFile>,
    /// Names and versions of schemas, mappings, lexicons, and tables.
    pub versions: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<crate::index::RawWeights>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranges: Option<crate::stats::WeightRangeSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub params: BTreeMap<String, serde_json::Value>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            inputs: Vec::new(),
            versions: BTreeMap::new(),
            weights: None,
            ranges: None,
            seed: None,
            params: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, role: &str, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputFile {
            role: role.to_string(),
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn version(&mut self, key: &str, value: impl Into<String>) {
        self.versions.insert(key.to_string(), value.into());
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable parameter"),
        );
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Output files staged in a hidden sibling directory and moved into place
/// only by [`StagedOutput::commit`]. Dropping without committing leaves the
/// target untouched.
pub struct StagedOutput {
    target: PathBuf,
    stage: tempfile::TempDir,
    files: Vec<String>,
}

impl StagedOutput {
    pub fn new(target: &Path) -> io::Result<Self> {
        let parent = match target.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&parent)?;
        let stage = tempfile::Builder::new()
            .prefix(".scvi-stage-")
            .tempdir_in(&parent)?;
        Ok(StagedOutput {
            target: target.to_path_buf(),
            stage,
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        fs::write(self.stage.path().join(name), bytes)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    /// Writes the manifest and moves everything into the target directory.
    pub fn commit(mut self, mut manifest: RunManifest) -> io::Result<()> {
        manifest.outputs = self.files.clone();
        let mut json = serde_json::to_vec_pretty(&manifest).map_err(io::Error::other)?;
        json.push(b'\n');
        self.write(MANIFEST_FILE, &json)?;
        if !self.target.exists() {
            let stage = self.stage.keep();
            return fs::rename(&stage, &self.target);
        }
        for f in &self.files {
            fs::rename(self.stage.path().join(f), self.target.join(f))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn staged_commit() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("out");
        let mut s = StagedOutput::new(&target).unwrap();
        s.write("a.txt", b"hi").unwrap();
        assert!(!target.exists());
        s.commit(RunManifest::new("test")).unwrap();
        assert_eq!(fs::read(target.join("a.txt")).unwrap(), b"hi");
        let m: RunManifest = serde_json::from_slice(&fs::read(target.join(MANIFEST_FILE)).unwrap()).unwrap();
        assert_eq!(m.outputs, vec!["a.txt"]);

        // second run into the existing directory replaces files
        let mut s = StagedOutput::new(&target).unwrap();
        s.write("a.txt", b"again").unwrap();
        s.commit(RunManifest::new("test")).unwrap();
        assert_eq!(fs::read(target.join("a.txt")).unwrap(), b"again");
        let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(leftovers.len(), 1);
    }

    #[test]
    fn dropped_stage_leaves_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("out");
        {
            let mut s = StagedOutput::new(&target).unwrap();
            s.write("a.txt", b"hi").unwrap();
        }
        assert!(!target.exists());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }
}
