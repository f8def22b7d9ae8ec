//! Corpus manifests: CSV with header `path,url,label`, where `label` is
//! `adult`, `safe`, or `unlabeled` and `path` is relative to the manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::page::{Label, Page, SuffixTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    /// Resolved against the manifest directory.
    pub path: PathBuf,
    pub url: String,
    pub label: Option<Label>,
}

#[derive(Serialize, Deserialize)]
struct Record {
    path: String,
    url: String,
    label: String,
}

fn parse_label(s: &str) -> Option<Option<Label>> {
    match s.trim().to_ascii_lowercase().as_str() {
        "unlabeled" | "" => Some(None),
        other => other.parse().ok().map(Some),
    }
}

pub fn read_manifest(path: &Path) -> Result<Vec<CorpusEntry>> {
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Manifest {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["path", "url", "label"] {
        return Err(Error::Manifest {
            path: path.to_path_buf(),
            message: "expected header `path,url,label`".into(),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in reader.deserialize::<Record>().enumerate() {
        let rec = rec?;
        let label = parse_label(&rec.label).ok_or_else(|| Error::Manifest {
            path: path.to_path_buf(),
            message: format!("row {}: unknown label `{}`", i + 1, rec.label),
        })?;
        out.push(CorpusEntry {
            path: base.join(&rec.path),
            url: rec.url,
            label,
        });
    }
    Ok(out)
}

impl CorpusEntry {
    /// Read and scan the page. Bytes that are not UTF-8 are replaced.
    pub fn load(&self, suffixes: &SuffixTable) -> Result<Page> {
        let bytes = fs::read(&self.path).map_err(|e| Error::io(&self.path, e))?;
        let html = String::from_utf8_lossy(&bytes);
        Page::from_html_with(suffixes, &self.url, &html, self.label)
    }
}

/// A page body to be written into a corpus directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusDoc {
    pub file_name: String,
    pub url: String,
    pub html: String,
    pub label: Option<Label>,
}

/// Write documents and a `manifest.csv` into `dir`.
pub fn write_corpus(dir: &Path, docs: &[CorpusDoc]) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let manifest = dir.join("manifest.csv");
    let mut w = csv::Writer::from_path(&manifest).map_err(|e| Error::Manifest {
        path: manifest.clone(),
        message: e.to_string(),
    })?;
    for doc in docs {
        let p = dir.join(&doc.file_name);
        fs::write(&p, &doc.html).map_err(|e| Error::io(&p, e))?;
        w.serialize(Record {
            path: doc.file_name.clone(),
            url: doc.url.clone(),
            label: doc.label.map_or("unlabeled", Label::as_str).to_string(),
        })?;
    }
    w.flush().map_err(|e| Error::io(&manifest, e))?;
    Ok(manifest)
}
