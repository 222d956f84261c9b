//! Triplet synthesis: for each prepared record draw (or take) a background
//! adjustment, perturb `B` into `B_f`, and composite `I_d = A I + (1 - A) B_f`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hmh_core::adjust::{sample_adjustment, AdjustmentKind, AdjustmentSpec};
use hmh_core::imgcore::io;
use hmh_core::matting::{composite, generate_trimap};
use hmh_core::RgbImage;
use rayon::prelude::*;

use crate::config::Config;
use crate::error::{Error, IoContext, Result};
use crate::manifest::{
    read_jsonl, rel_path, resolve, write_jsonl, CorpusRecord, Split, TripletRecord, CORPUS_MANIFEST,
    TRIPLET_MANIFEST,
};
use crate::prepare::{list_images, to_working_alpha};
use crate::report::BatchOutcome;
use crate::split::assign_splits;

/// Which matte drives the composite.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum AlphaSource {
    #[default]
    GroundTruth,
    /// Directory of predicted mattes named `<id>.png` (or `.jpg`).
    Predicted(PathBuf),
}

impl FromStr for AlphaSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "groundtruth" => Ok(AlphaSource::GroundTruth),
            Some(("predicted", dir)) if !dir.is_empty() => Ok(AlphaSource::Predicted(dir.into())),
            _ => Err(Error::Invalid(format!(
                "alpha source must be `groundtruth` or `predicted:<dir>`, got `{s}`"
            ))),
        }
    }
}

/// Forces one adjustment for every record instead of sampling.
#[derive(Debug, Clone, PartialEq)]
pub enum AdjustOverride {
    ColorTransfer(String),
    Illumination(f64),
    ColorEnhance(f64),
}

impl FromStr for AdjustOverride {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Invalid(format!(
                "adjust override must be `illumination:<factor>`, `color_enhance:<factor>` or `color_transfer:<id>`, got `{s}`"
            ))
        };
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let factor = || arg.parse::<f64>().map_err(|_| bad());
        match kind.replace('-', "_").as_str() {
            "illumination" => Ok(AdjustOverride::Illumination(factor()?)),
            "color_enhance" => Ok(AdjustOverride::ColorEnhance(factor()?)),
            "color_transfer" if !arg.is_empty() => Ok(AdjustOverride::ColorTransfer(arg.to_string())),
            _ => Err(bad()),
        }
    }
}

impl AdjustOverride {
    fn to_spec(&self, seed: u64) -> Result<AdjustmentSpec> {
        Ok(match self {
            AdjustOverride::ColorTransfer(id) => AdjustmentSpec::color_transfer(id.clone(), seed),
            AdjustOverride::Illumination(f) => AdjustmentSpec::illumination(*f, seed)?,
            AdjustOverride::ColorEnhance(f) => AdjustmentSpec::color_enhance(*f, seed)?,
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct TripletOptions {
    pub alpha_source: AlphaSource,
    pub adjust_override: Option<AdjustOverride>,
}

/// Recomputes `I_d` for a record from the files it references.
pub fn synthesize_disharmonious(root: &Path, record: &TripletRecord) -> Result<RgbImage> {
    let image = io::load_rgb(resolve(root, &record.image))?;
    let alpha = io::load_alpha(resolve(root, &record.composite_alpha))?;
    let background = io::load_rgb(resolve(root, &record.background))?;
    let target = match (&record.target_image, record.adjustment.kind()) {
        (Some(path), _) => Some(io::load_rgb(resolve(root, path))?),
        (None, AdjustmentKind::ColorTransfer) => {
            return Err(Error::Invalid(format!(
                "{}: color transfer record without target_image",
                record.image_id
            )))
        }
        (None, _) => None,
    };
    let adjusted = record.adjustment.apply(&background, target.as_ref())?;
    Ok(composite(&image, &alpha, &adjusted)?)
}

/// PNG bytes of the regenerated `I_d`.
pub fn regenerate(root: &Path, record: &TripletRecord) -> Result<Vec<u8>> {
    Ok(io::encode_png_rgb(&synthesize_disharmonious(root, record)?)?)
}

/// True when regenerating `I_d` reproduces the stored file byte for byte.
pub fn verify(root: &Path, record: &TripletRecord) -> Result<bool> {
    let path = resolve(root, &record.disharmonious);
    let stored = std::fs::read(&path).at(&path)?;
    Ok(regenerate(root, record)? == stored)
}

struct Context<'a> {
    root: &'a Path,
    cfg: &'a Config,
    opts: &'a TripletOptions,
    by_id: HashMap<&'a str, &'a CorpusRecord>,
    train_pool: Vec<String>,
    all_ids: Vec<String>,
    splits: HashMap<String, Split>,
    predicted: HashMap<String, PathBuf>,
}

impl Context<'_> {
    fn adjustment_for(&self, id: &str) -> Result<AdjustmentSpec> {
        if let Some(o) = &self.opts.adjust_override {
            return o.to_spec(self.cfg.seed);
        }
        // a one-image training split cannot supply a distinct target
        let pool = if self.train_pool.iter().any(|p| p != id) {
            &self.train_pool
        } else {
            &self.all_ids
        };
        Ok(sample_adjustment(self.cfg.seed, id, pool)?)
    }

    fn composite_alpha(&self, rec: &CorpusRecord) -> Result<String> {
        match &self.opts.alpha_source {
            AlphaSource::GroundTruth => Ok(rec.alpha.clone()),
            AlphaSource::Predicted(_) => {
                let src = self.predicted.get(&rec.image_id).ok_or_else(|| {
                    Error::Invalid(format!("no predicted alpha for `{}`", rec.image_id))
                })?;
                let alpha = to_working_alpha(&io::load_alpha(src)?, rec.width.max(rec.height))?;
                let rel = rel_path("predicted_alpha", &rec.image_id);
                io::save_alpha(&alpha, resolve(self.root, &rel))?;
                Ok(rel)
            }
        }
    }

    fn build(&self, rec: &CorpusRecord) -> Result<TripletRecord> {
        let id = rec.image_id.as_str();
        let adjustment = self.adjustment_for(id)?;
        let target_image = match adjustment.target_id() {
            Some(t) => Some(
                self.by_id
                    .get(t)
                    .ok_or_else(|| Error::Invalid(format!("color transfer target `{t}` not in corpus")))?
                    .image
                    .clone(),
            ),
            None => None,
        };
        let record = TripletRecord {
            image_id: id.to_string(),
            image: rec.image.clone(),
            alpha: rec.alpha.clone(),
            disharmonious: rel_path("disharmonious", id),
            trimap: rel_path("trimap", id),
            background: rec.background.clone(),
            composite_alpha: self.composite_alpha(rec)?,
            target_image,
            adjustment,
            split: self.splits[id],
        };
        let disharmonious = synthesize_disharmonious(self.root, &record)?;
        let gt_alpha = io::load_alpha(resolve(self.root, &record.alpha))?;
        let trimap = generate_trimap(&gt_alpha, self.cfg.band_radius);
        io::save_rgb(&disharmonious, resolve(self.root, &record.disharmonious))?;
        io::save_trimap(&trimap, resolve(self.root, &record.trimap))?;
        Ok(record)
    }
}

/// Builds triplets for every record of `<root>/corpus.jsonl` and writes
/// `<root>/triplets.jsonl`. Split labels are assigned first so colour-transfer
/// targets are drawn from the training split only.
pub fn build_triplets(root: &Path, cfg: &Config, opts: &TripletOptions) -> Result<BatchOutcome<TripletRecord>> {
    let corpus: Vec<CorpusRecord> = read_jsonl(&root.join(CORPUS_MANIFEST))?;
    let all_ids: Vec<String> = corpus.iter().map(|r| r.image_id.clone()).collect();
    let splits = assign_splits(&all_ids, cfg.train_fraction, cfg.seed)?;
    let mut train_pool: Vec<String> = all_ids
        .iter()
        .filter(|id| splits[*id] == Split::Train)
        .cloned()
        .collect();
    train_pool.sort();
    let mut sorted_ids = all_ids.clone();
    sorted_ids.sort();

    let mut warnings = Vec::new();
    let predicted = match &opts.alpha_source {
        AlphaSource::GroundTruth => HashMap::new(),
        AlphaSource::Predicted(dir) => {
            if !dir.is_dir() {
                return Err(Error::Invalid(format!("predicted alpha dir {} not found", dir.display())));
            }
            let (found, w) = list_images(dir)?;
            warnings.extend(w);
            found.into_iter().collect()
        }
    };
    for sub in ["disharmonious", "trimap", "predicted_alpha"] {
        if sub == "predicted_alpha" && opts.alpha_source == AlphaSource::GroundTruth {
            continue;
        }
        let dir = root.join(sub);
        std::fs::create_dir_all(&dir).at(&dir)?;
    }

    let ctx = Context {
        root,
        cfg,
        opts,
        by_id: corpus.iter().map(|r| (r.image_id.as_str(), r)).collect(),
        train_pool,
        all_ids: sorted_ids,
        splits,
        predicted,
    };
    let results: Vec<(String, Result<TripletRecord>)> = cfg.install(|| {
        corpus
            .par_iter()
            .map(|rec| (rec.image_id.clone(), ctx.build(rec)))
            .collect()
    })?;
    let outcome = BatchOutcome::from_results(results, warnings);
    write_jsonl(&root.join(TRIPLET_MANIFEST), &outcome.records)?;
    Ok(outcome)
}
