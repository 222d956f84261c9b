use std::collections::HashMap;
use std::path::Path;

use hmh_core::adjust::stream_rng;
use rand::seq::SliceRandom;

use crate::error::{Error, IoContext, Result};
use crate::manifest::{read_jsonl, write_jsonl, Split, TripletRecord};

/// Number of training records: `ceil(n * train_fraction)`.
pub fn train_count(n: usize, train_fraction: f64) -> usize {
    // the epsilon keeps products such as 10 * 0.9 from rounding up past 9
    ((n as f64 * train_fraction) - 1e-9).ceil().max(0.0) as usize
}

/// Deterministic split: ids are sorted, shuffled with the seed, and the first
/// `ceil(n * train_fraction)` become `train`.
pub fn assign_splits(ids: &[String], train_fraction: f64, seed: u64) -> Result<HashMap<String, Split>> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Invalid(format!(
            "train_fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let mut order: Vec<&String> = ids.iter().collect();
    order.sort();
    order.dedup();
    order.shuffle(&mut stream_rng(seed, "split", ""));
    let n_train = train_count(order.len(), train_fraction);
    Ok(order
        .into_iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), if i < n_train { Split::Train } else { Split::Test }))
        .collect())
}

/// Relabels a triplet manifest in place and writes `splits/{train,test}.txt`
/// next to it. Returns `(train, test)` counts.
pub fn split_manifest(manifest: &Path, train_fraction: f64, seed: u64) -> Result<(usize, usize)> {
    let mut records: Vec<TripletRecord> = read_jsonl(manifest)?;
    let ids: Vec<String> = records.iter().map(|r| r.image_id.clone()).collect();
    let labels = assign_splits(&ids, train_fraction, seed)?;
    for r in &mut records {
        r.split = labels[&r.image_id];
    }
    write_jsonl(manifest, &records)?;

    let root = manifest.parent().unwrap_or(Path::new("."));
    let dir = root.join("splits");
    std::fs::create_dir_all(&dir).at(&dir)?;
    let mut counts = (0, 0);
    for split in [Split::Train, Split::Test] {
        let list: Vec<&str> = records
            .iter()
            .filter(|r| r.split == split)
            .map(|r| r.image_id.as_str())
            .collect();
        match split {
            Split::Train => counts.0 = list.len(),
            Split::Test => counts.1 = list.len(),
        }
        let mut text = list.join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        let path = dir.join(format!("{split}.txt"));
        std::fs::write(&path, text).at(&path)?;
    }
    Ok(counts)
}
