use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: String,
}

/// Ordered list of (file, class label) pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct labels in lexicographic order.
    pub fn labels(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|e| e.label.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// The two class labels, lexicographically ordered. Errors unless exactly two exist.
    pub fn binary_classes(&self) -> Result<(String, String)> {
        let labels = self.labels();
        match labels.as_slice() {
            [a, b] => Ok((a.clone(), b.clone())),
            _ => Err(Error::ClassCount {
                found: labels.len(),
            }),
        }
    }

    /// Resolves relative entry paths against `base` (usually the manifest's directory).
    pub fn resolve(&self, base: &Path) -> DatasetManifest {
        DatasetManifest {
            entries: self
                .entries
                .iter()
                .map(|e| ManifestEntry {
                    path: if e.path.is_absolute() {
                        e.path.clone()
                    } else {
                        base.join(&e.path)
                    },
                    label: e.label.clone(),
                })
                .collect(),
        }
    }

    /// `path,label` CSV text, readable by [`parse_manifest`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from("path,label\n");
        for e in &self.entries {
            out.push_str(&format!("{},{}\n", e.path.display(), e.label));
        }
        out
    }

    /// Fails with [`Error::MissingFile`] on the first entry that does not exist.
    pub fn check_files(&self) -> Result<()> {
        match self.entries.iter().find(|e| !e.path.is_file()) {
            Some(e) => Err(Error::MissingFile(e.path.clone())),
            None => Ok(()),
        }
    }
}

/// Parses a `path,label` CSV manifest.
pub fn parse_manifest(text: &str) -> Result<DatasetManifest> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) => {
            let cols: Vec<&str> = header.split(',').map(str::trim).collect();
            if cols != ["path", "label"] {
                return Err(Error::Csv {
                    line: 1,
                    message: "expected header path,label".into(),
                });
            }
        }
        None => return Ok(DatasetManifest::default()),
    }
    let mut entries = Vec::new();
    for (i, raw) in lines {
        if raw.trim().is_empty() {
            continue;
        }
        let (path, label) = raw.rsplit_once(',').ok_or_else(|| Error::Csv {
            line: i + 1,
            message: "expected path,label".into(),
        })?;
        let (path, label) = (path.trim(), label.trim());
        if path.is_empty() || label.is_empty() {
            return Err(Error::Csv {
                line: i + 1,
                message: "empty path or label".into(),
            });
        }
        entries.push(ManifestEntry {
            path: PathBuf::from(path),
            label: label.to_string(),
        });
    }
    Ok(DatasetManifest { entries })
}
