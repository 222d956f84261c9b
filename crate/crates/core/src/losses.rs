//! Loss terms of the joint matting/harmonization objective, as pure functions
//! over already-computed predictions and discriminator scores. Expectations
//! are arithmetic batch means and reconstruction losses are per-element means.

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, invalid, Result};
use crate::imgcore::RgbImage;
use crate::matting::AlphaMatte;

/// Discriminator outputs for one batch: real images, harmonized outputs,
/// composites over the original background, and disharmonious composites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreBatch {
    d_real: Vec<f64>,
    d_harmonized: Vec<f64>,
    d_composite: Vec<f64>,
    d_disharmonious: Vec<f64>,
}

impl ScoreBatch {
    pub fn new(
        d_real: Vec<f64>,
        d_harmonized: Vec<f64>,
        d_composite: Vec<f64>,
        d_disharmonious: Vec<f64>,
    ) -> Result<Self> {
        let n = d_real.len();
        if n == 0 {
            return Err(invalid("scores", "batch must contain at least one sample"));
        }
        let lists = [&d_real, &d_harmonized, &d_composite, &d_disharmonious];
        if lists.iter().any(|l| l.len() != n) {
            return Err(invalid("scores", "all four score lists must have the same length"));
        }
        if lists.iter().flat_map(|l| l.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("scores", "scores must be finite"));
        }
        Ok(Self {
            d_real,
            d_harmonized,
            d_composite,
            d_disharmonious,
        })
    }

    /// Builds a batch from `(real, harmonized, composite, disharmonious)` rows.
    pub fn from_rows(rows: &[(f64, f64, f64, f64)]) -> Result<Self> {
        Self::new(
            rows.iter().map(|r| r.0).collect(),
            rows.iter().map(|r| r.1).collect(),
            rows.iter().map(|r| r.2).collect(),
            rows.iter().map(|r| r.3).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.d_real.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn d_real(&self) -> &[f64] {
        &self.d_real
    }

    pub fn d_harmonized(&self) -> &[f64] {
        &self.d_harmonized
    }

    pub fn d_composite(&self) -> &[f64] {
        &self.d_composite
    }

    pub fn d_disharmonious(&self) -> &[f64] {
        &self.d_disharmonious
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBundle {
    pub matting_recon: f64,
    pub harmony_recon: f64,
    /// Present when discriminator scores were supplied.
    pub disc: Option<f64>,
    pub gen_matting_adv: f64,
    pub gen_harmony_adv: f64,
    pub total_matting: f64,
    pub total_harmony: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

fn mean_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64
}

fn mean(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    values.sum::<f64>() / n as f64
}

/// L1 alpha reconstruction loss, averaged over pixels.
pub fn matting_recon_loss(pred: &AlphaMatte, gt: &AlphaMatte) -> Result<f64> {
    check_dims(pred.dims(), gt.dims())?;
    Ok(mean_abs_diff(pred.data(), gt.data()))
}

/// L1 image reconstruction loss, averaged over pixels and channels.
pub fn harmony_recon_loss(pred: &RgbImage, gt: &RgbImage) -> Result<f64> {
    check_dims(pred.dims(), gt.dims())?;
    Ok(mean_abs_diff(pred.data(), gt.data()))
}

/// `mean(D(I_h) + D(I_c) + D(I_d) - D(I))`.
pub fn discriminator_loss(scores: &ScoreBatch) -> f64 {
    let terms = (0..scores.len()).map(|i| {
        scores.d_harmonized[i] + scores.d_composite[i] + scores.d_disharmonious[i] - scores.d_real[i]
    });
    mean(terms, scores.len())
}

/// `(mean(D(I) - D(I_c)), mean(D(I) - D(I_h)))` for the matting and
/// harmonization generators respectively.
pub fn generator_adv_losses(scores: &ScoreBatch) -> (f64, f64) {
    let n = scores.len();
    let matting = mean(scores.d_real.iter().zip(&scores.d_composite).map(|(r, c)| r - c), n);
    let harmony = mean(scores.d_real.iter().zip(&scores.d_harmonized).map(|(r, h)| r - h), n);
    (matting, harmony)
}

/// Combines reconstruction and adversarial terms with GAN weights
/// `lambda1` (matting) and `lambda2` (harmonization).
pub fn total_losses(
    matting_recon: f64,
    harmony_recon: f64,
    adv: (f64, f64),
    lambda1: f64,
    lambda2: f64,
) -> Result<LossBundle> {
    for (name, v) in [("lambda1", lambda1), ("lambda2", lambda2)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
        }
    }
    Ok(LossBundle {
        matting_recon,
        harmony_recon,
        disc: None,
        gen_matting_adv: adv.0,
        gen_harmony_adv: adv.1,
        total_matting: matting_recon + lambda1 * adv.0,
        total_harmony: harmony_recon + lambda2 * adv.1,
        lambda1,
        lambda2,
    })
}

/// Every loss term for one batch.
pub fn loss_bundle(
    matting_recon: f64,
    harmony_recon: f64,
    scores: &ScoreBatch,
    lambda1: f64,
    lambda2: f64,
) -> Result<LossBundle> {
    let mut bundle = total_losses(
        matting_recon,
        harmony_recon,
        generator_adv_losses(scores),
        lambda1,
        lambda2,
    )?;
    bundle.disc = Some(discriminator_loss(scores));
    Ok(bundle)
}
