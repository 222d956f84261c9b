//! Line-oriented JSON manifests. Paths are stored relative to the directory
//! holding the manifest so a dataset directory can be moved as a whole.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use hmh_core::adjust::AdjustmentSpec;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, IoContext, Result};

pub const CORPUS_MANIFEST: &str = "corpus.jsonl";
pub const TRIPLET_MANIFEST: &str = "triplets.jsonl";

/// One prepared portrait: image `I`, alpha `A`, premultiplied foreground `F`
/// and inpainted background `B`, all at the working resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub image_id: String,
    pub image: String,
    pub alpha: String,
    pub foreground: String,
    pub background: String,
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Test => "test",
        })
    }
}

/// A training triplet `(A, I, I_d)` plus everything needed to rebuild `I_d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripletRecord {
    pub image_id: String,
    pub image: String,
    pub alpha: String,
    pub disharmonious: String,
    pub trimap: String,
    pub background: String,
    /// Alpha used for compositing; equals `alpha` unless a predicted matte was supplied.
    pub composite_alpha: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_image: Option<String>,
    pub adjustment: AdjustmentSpec,
    pub split: Split,
}

pub fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let file = File::create(path).at(path)?;
    let mut out = BufWriter::new(file);
    for r in records {
        let line = serde_json::to_string(r).map_err(|source| Error::Manifest {
            path: path.to_path_buf(),
            line: 0,
            source,
        })?;
        writeln!(out, "{line}").at(path)?;
    }
    out.flush().at(path)
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).at(path)?;
    let mut records = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.at(path)?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(serde_json::from_str(&line).map_err(|source| Error::Manifest {
            path: path.to_path_buf(),
            line: n + 1,
            source,
        })?);
    }
    Ok(records)
}

/// `root/rel`, where `rel` uses `/` separators.
pub fn resolve(root: &Path, rel: &str) -> PathBuf {
    rel.split('/').fold(root.to_path_buf(), |p, part| p.join(part))
}

pub(crate) fn rel_path(subdir: &str, image_id: &str) -> String {
    format!("{subdir}/{image_id}.png")
}
