use crate::error::{invalid, Result};
use crate::imgcore::RgbImage;

const LUMA: [f64; 3] = [0.299, 0.587, 0.114];

/// Global brightness change: `clip(factor * v)`.
pub fn illumination_adjust(img: &RgbImage, factor: f64) -> Result<RgbImage> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(invalid("factor", format!("must be finite and > 0, got {factor}")));
    }
    Ok(img.map_clipped(|px| px.map(|v| factor * v)))
}

/// Saturation scaling about per-pixel luma: `clip(gray + factor * (v - gray))`.
/// `factor = 0` yields grayscale and `factor = 1` the identity.
pub fn color_enhance(img: &RgbImage, factor: f64) -> Result<RgbImage> {
    if !(factor.is_finite() && factor >= 0.0) {
        return Err(invalid("factor", format!("must be finite and >= 0, got {factor}")));
    }
    if factor == 1.0 {
        return Ok(img.clone());
    }
    Ok(img.map_clipped(|px| {
        let gray = LUMA[0] * px[0] + LUMA[1] * px[1] + LUMA[2] * px[2];
        px.map(|v| gray + factor * (v - gray))
    }))
}
