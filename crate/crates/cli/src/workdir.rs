use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use eigenprog::features::AblationLevel;
use eigenprog::pianoroll::{parse_manifest, DatasetManifest, ManifestEntry};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn hash_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(sha256_hex(&bytes))
}

/// Loads a manifest and resolves its entries against the manifest's directory.
pub fn load_manifest(path: &Path) -> Result<DatasetManifest> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read manifest {}", path.display()))?;
    let m = parse_manifest(&text).with_context(|| format!("in manifest {}", path.display()))?;
    Ok(m.resolve(path.parent().unwrap_or(Path::new("."))))
}

/// Stable identifier of a manifest entry: its position and file stem.
pub fn piece_id(index: usize, entry: &ManifestEntry) -> String {
    let stem = entry.path.file_stem().and_then(|s| s.to_str()).unwrap_or("piece");
    let clean: String = stem
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    format!("{index:04}_{clean}")
}

/// File layout of a work directory.
#[derive(Debug, Clone)]
pub struct WorkDir {
    pub root: PathBuf,
}

impl WorkDir {
    pub fn create(root: &Path) -> Result<Self> {
        for sub in ["rolls", "transforms"] {
            fs::create_dir_all(root.join(sub)).with_context(|| format!("cannot create {}", root.join(sub).display()))?;
        }
        Ok(WorkDir { root: root.to_path_buf() })
    }

    pub fn roll(&self, id: &str) -> PathBuf {
        self.root.join("rolls").join(format!("{id}.eprl"))
    }

    pub fn s1(&self, id: &str) -> PathBuf {
        self.root.join("transforms").join(format!("{id}.s1.csv"))
    }

    pub fn s2(&self, id: &str) -> PathBuf {
        self.root.join("transforms").join(format!("{id}.s2.csv"))
    }

    pub fn meta(&self, id: &str) -> PathBuf {
        self.root.join("transforms").join(format!("{id}.meta.json"))
    }

    /// Records the input hash an output was produced from.
    pub fn stamp(&self, output: &Path) -> PathBuf {
        let mut name = output.file_name().unwrap_or_default().to_os_string();
        name.push(".stamp");
        output.with_file_name(name)
    }

    pub fn features(&self, level: AblationLevel) -> PathBuf {
        self.root.join(format!("features_{level}.epfm"))
    }

    pub fn selected(&self, level: AblationLevel) -> PathBuf {
        self.root.join(format!("selected_{level}.csv"))
    }

    pub fn report(&self, level: AblationLevel) -> PathBuf {
        self.root.join(format!("crossval_{level}.json"))
    }

    pub fn model(&self, level: AblationLevel) -> PathBuf {
        self.root.join(format!("model_{level}.epsv"))
    }

    pub fn config_copy(&self) -> PathBuf {
        self.root.join("config.toml")
    }

    pub fn provenance(&self) -> PathBuf {
        self.root.join("provenance.json")
    }

    /// True when `output` exists and was stamped with `key`.
    pub fn up_to_date(&self, output: &Path, key: &str) -> bool {
        output.is_file() && fs::read_to_string(self.stamp(output)).is_ok_and(|s| s.trim() == key)
    }

    pub fn write_stamp(&self, output: &Path, key: &str) -> Result<()> {
        fs::write(self.stamp(output), key)?;
        Ok(())
    }
}

#[derive(Debug, Serialize)]
struct FileRecord {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Provenance {
    command: String,
    cli_version: &'static str,
    core_version: &'static str,
    config_sha256: String,
    manifest: Option<FileRecord>,
    inputs: Vec<FileRecord>,
    outputs: Vec<FileRecord>,
}

fn record(path: &Path, base: Option<&Path>) -> Result<FileRecord> {
    let shown = base.and_then(|b| path.strip_prefix(b).ok()).unwrap_or(path);
    Ok(FileRecord {
        path: shown.display().to_string(),
        sha256: hash_file(path)?,
    })
}

/// Copies the effective config into the work directory and writes hashes of
/// the manifest, the inputs and every file currently in the work directory.
pub fn write_provenance(work: &WorkDir, cfg: &RunConfig, command: &str, manifest: Option<&DatasetManifest>) -> Result<()> {
    let config_text = cfg.to_toml();
    fs::write(work.config_copy(), &config_text)?;
    let inputs = manifest
        .map(|m| m.entries.iter().filter(|e| e.path.is_file()).map(|e| record(&e.path, None)).collect::<Result<Vec<_>>>())
        .transpose()?
        .unwrap_or_default();
    let mut outputs = Vec::new();
    let mut stack = vec![work.root.clone()];
    while let Some(dir) = stack.pop() {
        let mut entries: Vec<PathBuf> = fs::read_dir(&dir)?.map(|e| e.map(|e| e.path())).collect::<std::io::Result<_>>()?;
        entries.sort();
        for p in entries {
            if p.is_dir() {
                stack.push(p);
            } else if p != work.provenance() {
                outputs.push(record(&p, Some(&work.root))?);
            }
        }
    }
    outputs.sort_by(|a, b| a.path.cmp(&b.path));
    let prov = Provenance {
        command: command.to_string(),
        cli_version: env!("CARGO_PKG_VERSION"),
        core_version: eigenprog::VERSION,
        config_sha256: sha256_hex(config_text.as_bytes()),
        manifest: cfg.manifest.as_deref().filter(|p| p.is_file()).map(|p| record(p, None)).transpose()?,
        inputs,
        outputs,
    };
    fs::write(work.provenance(), serde_json::to_string_pretty(&prov)?)?;
    Ok(())
}
