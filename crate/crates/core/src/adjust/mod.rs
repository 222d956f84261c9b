//! Background perturbations used to synthesize disharmonious composites,
//! plus background recovery by inpainting.

mod inpaint;
mod reinhard;
mod sample;
mod tone;

pub use inpaint::{inpaint_background, inpaint_mask, INPAINT_RADIUS};
pub use reinhard::{reinhard_transfer, reinhard_transfer_lalphabeta, SIGMA_GUARD};
pub use sample::{
    sample_adjustment, stream_rng, ENHANCE_RANGE, ILLUMINATION_DARK, ILLUMINATION_BRIGHT,
};
pub use tone::{color_enhance, illumination_adjust};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::imgcore::RgbImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjustmentKind {
    ColorTransfer,
    Illumination,
    ColorEnhance,
}

impl AdjustmentKind {
    pub const ALL: [AdjustmentKind; 3] = [
        AdjustmentKind::ColorTransfer,
        AdjustmentKind::Illumination,
        AdjustmentKind::ColorEnhance,
    ];
}

/// Which background perturbation was applied, with every parameter needed to
/// replay it. `target_id` is present exactly for colour transfer and `factor`
/// exactly for the other two kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAdjustmentSpec", into = "RawAdjustmentSpec")]
pub struct AdjustmentSpec {
    kind: AdjustmentKind,
    target_id: Option<String>,
    factor: Option<f64>,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct RawAdjustmentSpec {
    kind: AdjustmentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    factor: Option<f64>,
    seed: u64,
}

impl TryFrom<RawAdjustmentSpec> for AdjustmentSpec {
    type Error = Error;

    fn try_from(raw: RawAdjustmentSpec) -> Result<Self> {
        let spec = AdjustmentSpec {
            kind: raw.kind,
            target_id: raw.target_id,
            factor: raw.factor,
            seed: raw.seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<AdjustmentSpec> for RawAdjustmentSpec {
    fn from(spec: AdjustmentSpec) -> Self {
        RawAdjustmentSpec {
            kind: spec.kind,
            target_id: spec.target_id,
            factor: spec.factor,
            seed: spec.seed,
        }
    }
}

impl AdjustmentSpec {
    pub fn color_transfer(target_id: impl Into<String>, seed: u64) -> Self {
        Self {
            kind: AdjustmentKind::ColorTransfer,
            target_id: Some(target_id.into()),
            factor: None,
            seed,
        }
    }

    pub fn illumination(factor: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            kind: AdjustmentKind::Illumination,
            target_id: None,
            factor: Some(factor),
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn color_enhance(factor: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            kind: AdjustmentKind::ColorEnhance,
            target_id: None,
            factor: Some(factor),
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            AdjustmentKind::ColorTransfer => {
                if self.target_id.is_none() || self.factor.is_some() {
                    return Err(invalid(
                        "adjustment",
                        "color transfer requires target_id and no factor",
                    ));
                }
            }
            AdjustmentKind::Illumination | AdjustmentKind::ColorEnhance => {
                if self.target_id.is_some() {
                    return Err(invalid("adjustment", "target_id only applies to color transfer"));
                }
                match self.factor {
                    Some(f) if f.is_finite() && f > 0.0 => {}
                    _ => return Err(invalid("factor", "must be present, finite and > 0")),
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> AdjustmentKind {
        self.kind
    }

    pub fn target_id(&self) -> Option<&str> {
        self.target_id.as_deref()
    }

    pub fn factor(&self) -> Option<f64> {
        self.factor
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Perturbs `background`. Colour transfer needs the decoded target image.
    pub fn apply(&self, background: &RgbImage, target: Option<&RgbImage>) -> Result<RgbImage> {
        match self.kind {
            AdjustmentKind::ColorTransfer => {
                let target = target.ok_or_else(|| invalid("target", "color transfer needs a target image"))?;
                Ok(reinhard_transfer(background, target))
            }
            AdjustmentKind::Illumination => illumination_adjust(background, self.factor.unwrap_or(1.0)),
            AdjustmentKind::ColorEnhance => color_enhance(background, self.factor.unwrap_or(1.0)),
        }
    }
}
