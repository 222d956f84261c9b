//! File-level front end for the loss oracle.

use std::path::{Path, PathBuf};

use hmh_core::imgcore::io;
use hmh_core::losses::{harmony_recon_loss, loss_bundle, matting_recon_loss, total_losses, LossBundle, ScoreBatch};
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct ScoreRow {
    d_real: f64,
    d_harmonized: f64,
    d_composite: f64,
    d_disharmonious: f64,
}

/// Reads a `d_real,d_harmonized,d_composite,d_disharmonious` table, one row per sample.
pub fn read_score_batch(path: &Path) -> Result<ScoreBatch> {
    let wrap = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(wrap)?;
    let rows = reader
        .deserialize()
        .collect::<std::result::Result<Vec<ScoreRow>, _>>()
        .map_err(wrap)?;
    let rows: Vec<_> = rows
        .iter()
        .map(|r| (r.d_real, r.d_harmonized, r.d_composite, r.d_disharmonious))
        .collect();
    Ok(ScoreBatch::from_rows(&rows)?)
}

#[derive(Debug, Clone, Default)]
pub struct LossInputs {
    pub scores: Option<PathBuf>,
    pub pred_alpha: Option<PathBuf>,
    pub gt_alpha: Option<PathBuf>,
    pub pred_image: Option<PathBuf>,
    pub gt_image: Option<PathBuf>,
    pub lambda1: f64,
    pub lambda2: f64,
}

fn pair<'a>(a: &'a Option<PathBuf>, b: &'a Option<PathBuf>, what: &str) -> Result<Option<(&'a Path, &'a Path)>> {
    match (a, b) {
        (Some(a), Some(b)) => Ok(Some((a, b))),
        (None, None) => Ok(None),
        _ => Err(Error::Invalid(format!("{what}: both prediction and ground truth are required"))),
    }
}

/// Reconstruction terms default to 0 when their image pair is not given;
/// adversarial terms default to 0 when no score table is given.
pub fn compute_losses(inputs: &LossInputs) -> Result<LossBundle> {
    let matting = match pair(&inputs.pred_alpha, &inputs.gt_alpha, "alpha")? {
        Some((p, g)) => matting_recon_loss(&io::load_alpha(p)?, &io::load_alpha(g)?)?,
        None => 0.0,
    };
    let harmony = match pair(&inputs.pred_image, &inputs.gt_image, "image")? {
        Some((p, g)) => harmony_recon_loss(&io::load_rgb(p)?, &io::load_rgb(g)?)?,
        None => 0.0,
    };
    Ok(match &inputs.scores {
        Some(path) => loss_bundle(matting, harmony, &read_score_batch(path)?, inputs.lambda1, inputs.lambda2)?,
        None => total_losses(matting, harmony, (0.0, 0.0), inputs.lambda1, inputs.lambda2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_table_bundle() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scores.csv");
        std::fs::write(
            &path,
            "d_real,d_harmonized,d_composite,d_disharmonious\n1,0.2,0.3,0.1\n0.5,0.5,0.5,0.5\n",
        )
        .unwrap();
        let bundle = compute_losses(&LossInputs {
            scores: Some(path),
            lambda1: 0.02,
            lambda2: 0.01,
            ..Default::default()
        })
        .unwrap();
        assert!((bundle.disc.unwrap() - 0.3).abs() < 1e-15);
        assert!((bundle.gen_matting_adv - 0.35).abs() < 1e-15);
        assert!((bundle.gen_harmony_adv - 0.4).abs() < 1e-15);
    }

    #[test]
    fn half_pair_rejected() {
        let r = compute_losses(&LossInputs {
            pred_alpha: Some("x.png".into()),
            ..Default::default()
        });
        assert!(r.is_err());
    }
}
