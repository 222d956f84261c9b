//! Directory-level evaluation reports: matting metrics and MOS tables.

use std::fmt::Write as _;
use std::path::Path;

use hmh_core::imgcore::io;
use hmh_core::metrics::{evaluate, mos_aggregate, MattingScore, MetricParams, MosSummary, RaterScore};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::prepare::list_images;
use crate::report::RecordFailure;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageScore {
    pub image_id: String,
    #[serde(flatten)]
    pub score: MattingScore,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MattingReport {
    pub rows: Vec<ImageScore>,
    pub failures: Vec<RecordFailure>,
}

/// Corpus means of the four metrics (unweighted over images).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanScore {
    pub mse: f64,
    pub sad: f64,
    pub grad: f64,
    pub conn: f64,
    pub images: usize,
}

impl MattingReport {
    pub fn mean(&self) -> Option<MeanScore> {
        if self.rows.is_empty() {
            return None;
        }
        let n = self.rows.len() as f64;
        let avg = |f: fn(&MattingScore) -> f64| self.rows.iter().map(|r| f(&r.score)).sum::<f64>() / n;
        Some(MeanScore {
            mse: avg(|s| s.mse),
            sad: avg(|s| s.sad),
            grad: avg(|s| s.grad),
            conn: avg(|s| s.conn),
            images: self.rows.len(),
        })
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<24} {:>10} {:>10} {:>10} {:>10} {:>8}", "image", "MSE", "SAD", "Grad", "Conn", "unknown");
        for r in &self.rows {
            let s = &r.score;
            let _ = writeln!(
                out,
                "{:<24} {:>10.5} {:>10.4} {:>10.4} {:>10.4} {:>8}",
                r.image_id, s.mse, s.sad, s.grad, s.conn, s.unknown_pixel_count
            );
        }
        if let Some(m) = self.mean() {
            let _ = writeln!(
                out,
                "{:<24} {:>10.5} {:>10.4} {:>10.4} {:>10.4} {:>8}",
                format!("mean ({} images)", m.images),
                m.mse,
                m.sad,
                m.grad,
                m.conn,
                ""
            );
        }
        for f in &self.failures {
            let _ = writeln!(out, "FAILED {}: {}", f.image_id, f.reason);
        }
        out
    }

    /// One JSON object per image, then a `mean` record.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&serde_json::to_string(r).expect("plain data"));
            out.push('\n');
        }
        if let Some(m) = self.mean() {
            out.push_str(&serde_json::to_string(&serde_json::json!({ "mean": m })).expect("plain data"));
            out.push('\n');
        }
        out
    }
}

fn score_one(pred: &Path, gt: &Path, trimap: &Path, params: &MetricParams) -> Result<MattingScore> {
    let pred = io::load_alpha(pred)?;
    let gt = io::load_alpha(gt)?;
    let trimap = io::load_trimap(trimap)?;
    Ok(evaluate(&pred, &gt, &trimap, params)?)
}

/// Scores every ground-truth matte in `gt_dir` against the same-stem files in
/// `pred_dir` and `trimap_dir`.
pub fn eval_matting(pred_dir: &Path, gt_dir: &Path, trimap_dir: &Path, cfg: &Config) -> Result<MattingReport> {
    let (gt, _) = list_images(gt_dir)?;
    let (pred, _) = list_images(pred_dir)?;
    let (tri, _) = list_images(trimap_dir)?;
    let params = cfg.metric_params();
    let results: Vec<(String, Result<MattingScore>)> = cfg.install(|| {
        gt.par_iter()
            .map(|(id, gt_path)| {
                let r = match (pred.get(id), tri.get(id)) {
                    (Some(p), Some(t)) => score_one(p, gt_path, t, &params),
                    (None, _) => Err(Error::Invalid("missing prediction".into())),
                    (_, None) => Err(Error::Invalid("missing trimap".into())),
                };
                (id.clone(), r)
            })
            .collect()
    })?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (image_id, r) in results {
        match r {
            Ok(score) => rows.push(ImageScore { image_id, score }),
            Err(e) => failures.push(RecordFailure {
                image_id,
                reason: e.to_string(),
            }),
        }
    }
    Ok(MattingReport { rows, failures })
}

/// Reads an `image_id,rater_id,method,score` table.
pub fn read_scores_csv(path: &Path) -> Result<Vec<RaterScore>> {
    let wrap = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(wrap)?;
    reader.deserialize().collect::<std::result::Result<Vec<RaterScore>, _>>().map_err(wrap)
}

pub fn mos_table(summaries: &std::collections::BTreeMap<String, MosSummary>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<20} {:>8} {:>8} {:>8} {:>8}", "method", "MOS", "Std", "raters", "scores");
    for (method, s) in summaries {
        let _ = writeln!(
            out,
            "{:<20} {:>8.3} {:>8.3} {:>8} {:>8}",
            method, s.mean, s.stddev, s.rater_count, s.score_count
        );
    }
    out
}

pub fn eval_mos(path: &Path) -> Result<std::collections::BTreeMap<String, MosSummary>> {
    Ok(mos_aggregate(&read_scores_csv(path)?)?)
}
