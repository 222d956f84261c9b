//! Alpha-matte algebra: compositing, foreground extraction, trimap
//! generation and trimap-guided fusion of raw matting predictions.

use crate::error::{check_dims, Error, Result};
use crate::imgcore::{check_shape, check_unit_range, RgbImage};
use crate::morphology::dilate_square;

/// Row-major opacity map with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaMatte {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl AlphaMatte {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_shape(width, height, 1, data.len())?;
        check_unit_range(&data)?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let data = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(width, height, data)
    }

    pub(crate) fn from_raw_unchecked(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrimapLabel {
    Background,
    Unknown,
    Foreground,
}

impl TrimapLabel {
    /// On-disk gray level.
    pub fn encode(self) -> u8 {
        match self {
            TrimapLabel::Background => 0,
            TrimapLabel::Unknown => 128,
            TrimapLabel::Foreground => 255,
        }
    }

    pub fn decode(value: u8) -> Option<Self> {
        match value {
            0 => Some(TrimapLabel::Background),
            128 => Some(TrimapLabel::Unknown),
            255 => Some(TrimapLabel::Foreground),
            _ => None,
        }
    }
}

/// Three-state map; the unknown band is where matting predictions are used
/// and where every metric is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Trimap {
    width: usize,
    height: usize,
    labels: Vec<TrimapLabel>,
}

impl Trimap {
    pub fn new(width: usize, height: usize, labels: Vec<TrimapLabel>) -> Result<Self> {
        check_shape(width, height, 1, labels.len())?;
        Ok(Self {
            width,
            height,
            labels,
        })
    }

    pub fn filled(width: usize, height: usize, label: TrimapLabel) -> Result<Self> {
        Self::new(width, height, vec![label; width * height])
    }

    /// Parses the `{0, 128, 255}` gray-level encoding; any other level is an error.
    pub fn decode(width: usize, height: usize, raw: &[u8]) -> Result<Self> {
        check_shape(width, height, 1, raw.len())?;
        let labels = raw
            .iter()
            .enumerate()
            .map(|(index, &value)| TrimapLabel::decode(value).ok_or(Error::TrimapEncoding { index, value }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            width,
            height,
            labels,
        })
    }

    pub fn encode(&self) -> Vec<u8> {
        self.labels.iter().map(|l| l.encode()).collect()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn labels(&self) -> &[TrimapLabel] {
        &self.labels
    }

    /// Unknown-region indicator `M` (1 where unknown).
    pub fn unknown_mask(&self) -> Vec<bool> {
        self.labels.iter().map(|l| *l == TrimapLabel::Unknown).collect()
    }

    pub fn unknown_count(&self) -> usize {
        self.labels.iter().filter(|l| **l == TrimapLabel::Unknown).count()
    }
}

/// `alpha * fg_source + (1 - alpha) * background`, channelwise.
pub fn composite(fg_source: &RgbImage, alpha: &AlphaMatte, background: &RgbImage) -> Result<RgbImage> {
    check_dims(fg_source.dims(), alpha.dims())?;
    check_dims(fg_source.dims(), background.dims())?;
    let mut data = Vec::with_capacity(fg_source.data().len());
    for ((f, b), &a) in fg_source.pixels().zip(background.pixels()).zip(alpha.data()) {
        for c in 0..3 {
            data.push(blend(f[c], b[c], a));
        }
    }
    Ok(RgbImage::from_raw_unchecked(fg_source.width(), fg_source.height(), data))
}

// Written so that a == 1 and a == 0 return the endpoints bit-exactly, and the
// result stays between them for fractional a.
#[inline]
fn blend(f: f64, b: f64, a: f64) -> f64 {
    let v = a * f + (1.0 - a) * b;
    v.clamp(f.min(b), f.max(b))
}

/// Premultiplied foreground `alpha * img`.
pub fn extract_foreground(img: &RgbImage, alpha: &AlphaMatte) -> Result<RgbImage> {
    check_dims(img.dims(), alpha.dims())?;
    let mut data = Vec::with_capacity(img.data().len());
    for (px, &a) in img.pixels().zip(alpha.data()) {
        data.extend(px.iter().map(|v| a * v));
    }
    Ok(RgbImage::from_raw_unchecked(img.width(), img.height(), data))
}

/// Trimap whose unknown band is the fractional-alpha set dilated by a square
/// of radius `band_radius`; remaining pixels are foreground where alpha is 1
/// and background where alpha is 0.
pub fn generate_trimap(alpha: &AlphaMatte, band_radius: usize) -> Trimap {
    let fractional: Vec<bool> = alpha.data().iter().map(|&a| a > 0.0 && a < 1.0).collect();
    let unknown = dilate_square(&fractional, alpha.width(), alpha.height(), band_radius);
    let labels = alpha
        .data()
        .iter()
        .zip(unknown)
        .map(|(&a, u)| match (u, a >= 1.0) {
            (true, _) => TrimapLabel::Unknown,
            (false, true) => TrimapLabel::Foreground,
            (false, false) => TrimapLabel::Background,
        })
        .collect();
    Trimap {
        width: alpha.width(),
        height: alpha.height(),
        labels,
    }
}

/// `M * raw_pred + (1 - M) * known`, where the known value is 1 on foreground
/// and 0 on background.
pub fn fuse_prediction(raw_pred: &AlphaMatte, trimap: &Trimap) -> Result<AlphaMatte> {
    check_dims(raw_pred.dims(), trimap.dims())?;
    let data = raw_pred
        .data()
        .iter()
        .zip(trimap.labels())
        .map(|(&p, label)| match label {
            TrimapLabel::Unknown => p,
            TrimapLabel::Foreground => 1.0,
            TrimapLabel::Background => 0.0,
        })
        .collect();
    Ok(AlphaMatte::from_raw_unchecked(raw_pred.width(), raw_pred.height(), data))
}
