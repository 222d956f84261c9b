use super::RgbImage;
use crate::error::{invalid, Result};
use crate::matting::AlphaMatte;

/// Images that can be bilinearly resampled.
pub trait Resample: Sized {
    fn resize_bilinear(&self, out_w: usize, out_h: usize) -> Result<Self>;
}

/// Bilinear resize with half-pixel-centre sampling and edge clamping.
///
/// Every output value is a convex combination of input values, so the output
/// never leaves the input's `[min, max]` range.
pub fn resize_bilinear<T: Resample>(img: &T, out_w: usize, out_h: usize) -> Result<T> {
    img.resize_bilinear(out_w, out_h)
}

impl Resample for RgbImage {
    fn resize_bilinear(&self, out_w: usize, out_h: usize) -> Result<Self> {
        let data = resize_interleaved(self.data(), self.width(), self.height(), 3, out_w, out_h)?;
        Ok(RgbImage::from_raw_unchecked(out_w, out_h, data))
    }
}

impl Resample for AlphaMatte {
    fn resize_bilinear(&self, out_w: usize, out_h: usize) -> Result<Self> {
        let data = resize_interleaved(self.data(), self.width(), self.height(), 1, out_w, out_h)?;
        Ok(AlphaMatte::from_raw_unchecked(out_w, out_h, data))
    }
}

/// Source sample positions for one axis: (lower index, upper index, upper weight).
fn axis_taps(src: usize, dst: usize) -> Vec<(usize, usize, f64)> {
    let scale = src as f64 / dst as f64;
    (0..dst)
        .map(|i| {
            let pos = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, (src - 1) as f64);
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(src - 1);
            (lo, hi, pos - lo as f64)
        })
        .collect()
}

fn resize_interleaved(
    data: &[f64],
    w: usize,
    h: usize,
    channels: usize,
    out_w: usize,
    out_h: usize,
) -> Result<Vec<f64>> {
    if out_w == 0 || out_h == 0 {
        return Err(invalid(
            "target size",
            format!("must be at least 1x1, got {out_w}x{out_h}"),
        ));
    }
    if (w, h) == (out_w, out_h) {
        return Ok(data.to_vec());
    }
    let xs = axis_taps(w, out_w);
    let ys = axis_taps(h, out_h);
    let mut out = Vec::with_capacity(out_w * out_h * channels);
    for &(y0, y1, fy) in &ys {
        for &(x0, x1, fx) in &xs {
            for c in 0..channels {
                let at = |x: usize, y: usize| data[(y * w + x) * channels + c];
                let top = at(x0, y0) * (1.0 - fx) + at(x1, y0) * fx;
                let bottom = at(x0, y1) * (1.0 - fx) + at(x1, y1) * fx;
                let v = top * (1.0 - fy) + bottom * fy;
                // rounding can overshoot a constant by one ulp
                let lo = at(x0, y0).min(at(x1, y0)).min(at(x0, y1)).min(at(x1, y1));
                let hi = at(x0, y0).max(at(x1, y0)).max(at(x0, y1)).max(at(x1, y1));
                out.push(v.clamp(lo, hi));
            }
        }
    }
    Ok(out)
}
