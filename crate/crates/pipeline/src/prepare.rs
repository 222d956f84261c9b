//! Corpus preparation: resize each `(I, A)` pair, derive the premultiplied
//! foreground `F = A I` and the inpainted background `B`, and write a corpus
//! manifest.
//!
//! Input layout: `<corpus>/images/<id>.{png,jpg,jpeg}` paired by stem with
//! `<corpus>/alphas/<id>.{png,jpg,jpeg}`. Output layout under `<out>`:
//! `image/`, `alpha/`, `foreground/`, `background/` and `corpus.jsonl`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hmh_core::adjust::inpaint_background;
use hmh_core::imgcore::{io, Resample};
use hmh_core::matting::extract_foreground;
use hmh_core::{AlphaMatte, RgbImage};
use rayon::prelude::*;

use crate::config::Config;
use crate::error::{IoContext, Result};
use crate::manifest::{rel_path, resolve, write_jsonl, CorpusRecord, CORPUS_MANIFEST};
use crate::report::BatchOutcome;

const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

/// Image files in `dir` keyed by stem. A missing directory is empty.
pub fn list_images(dir: &Path) -> Result<(BTreeMap<String, PathBuf>, Vec<String>)> {
    let mut found = BTreeMap::new();
    let mut warnings = Vec::new();
    if !dir.is_dir() {
        return Ok((found, warnings));
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .at(dir)?
        .map(|e| e.map(|e| e.path()).at(dir))
        .collect::<Result<_>>()?;
    paths.sort();
    for path in paths {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase());
        if !ext.is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.as_str())) || !path.is_file() {
            continue;
        }
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()).map(str::to_owned) else {
            continue;
        };
        if let Some(prev) = found.get(&stem) {
            warnings.push(format!(
                "duplicate stem `{stem}`: keeping {}, ignoring {}",
                Path::display(prev),
                path.display()
            ));
            continue;
        }
        found.insert(stem, path);
    }
    Ok((found, warnings))
}

/// Resize to `size x size` and snap to the 8-bit grid so in-memory values
/// equal what later stages decode from disk.
pub(crate) fn to_working_rgb(img: &RgbImage, size: usize) -> Result<RgbImage> {
    let resized = img.resize_bilinear(size, size)?;
    Ok(RgbImage::new(
        size,
        size,
        resized.data().iter().map(|v| io::from_u8(io::to_u8(*v))).collect(),
    )?)
}

pub(crate) fn to_working_alpha(alpha: &AlphaMatte, size: usize) -> Result<AlphaMatte> {
    let resized = alpha.resize_bilinear(size, size)?;
    Ok(AlphaMatte::new(
        size,
        size,
        resized.data().iter().map(|v| io::from_u8(io::to_u8(*v))).collect(),
    )?)
}

fn prepare_one(id: &str, image: &Path, alpha: &Path, out_dir: &Path, cfg: &Config) -> Result<CorpusRecord> {
    let img = io::load_rgb(image)?;
    let a = io::load_alpha(alpha)?;
    if img.dims() != a.dims() {
        log::debug!("{id}: alpha {:?} differs from image {:?}; both resized", a.dims(), img.dims());
    }
    let img = to_working_rgb(&img, cfg.size)?;
    let a = to_working_alpha(&a, cfg.size)?;
    let fg = extract_foreground(&img, &a)?;
    let bg = inpaint_background(&img, &a, cfg.mask_dilation)?;

    let record = CorpusRecord {
        image_id: id.to_string(),
        image: rel_path("image", id),
        alpha: rel_path("alpha", id),
        foreground: rel_path("foreground", id),
        background: rel_path("background", id),
        width: cfg.size,
        height: cfg.size,
    };
    io::save_rgb(&img, resolve(out_dir, &record.image))?;
    io::save_alpha(&a, resolve(out_dir, &record.alpha))?;
    io::save_rgb(&fg, resolve(out_dir, &record.foreground))?;
    io::save_rgb(&bg, resolve(out_dir, &record.background))?;
    Ok(record)
}

pub fn prepare(corpus_dir: &Path, out_dir: &Path, cfg: &Config) -> Result<BatchOutcome<CorpusRecord>> {
    let (images, mut warnings) = list_images(&corpus_dir.join("images"))?;
    let (alphas, w2) = list_images(&corpus_dir.join("alphas"))?;
    warnings.extend(w2);
    for id in images.keys().filter(|k| !alphas.contains_key(*k)) {
        warnings.push(format!("orphan image `{id}` has no alpha; skipped"));
    }
    for id in alphas.keys().filter(|k| !images.contains_key(*k)) {
        warnings.push(format!("orphan alpha `{id}` has no image; skipped"));
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    let pairs: Vec<(&String, &PathBuf, &PathBuf)> = images
        .iter()
        .filter_map(|(id, img)| alphas.get(id).map(|a| (id, img, a)))
        .collect();

    for sub in ["image", "alpha", "foreground", "background"] {
        let dir = out_dir.join(sub);
        std::fs::create_dir_all(&dir).at(&dir)?;
    }
    let results: Vec<(String, Result<CorpusRecord>)> = cfg.install(|| {
        pairs
            .par_iter()
            .map(|(id, img, a)| ((*id).clone(), prepare_one(id, img, a, out_dir, cfg)))
            .collect()
    })?;
    let outcome = BatchOutcome::from_results(results, warnings);
    write_jsonl(&out_dir.join(CORPUS_MANIFEST), &outcome.records)?;
    Ok(outcome)
}
