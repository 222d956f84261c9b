//! Image carriers, lαβ color space, bilinear resampling and 8-bit PNG I/O.

mod color;
pub mod io;
mod resize;

pub use color::{lalphabeta_to_rgb, rgb_to_lalphabeta, LalphabetaImage, LMS_FLOOR};
pub use resize::{resize_bilinear, Resample};

use crate::error::{Error, Result};

/// Row-major `width x height x 3` image with channel values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_shape(width, height, 3, data.len())?;
        check_unit_range(&data)?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, rgb: [f64; 3]) -> Result<Self> {
        let data = rgb.repeat(width * height);
        Self::new(width, height, data)
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [f64; 3],
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    /// Caller guarantees shape and range; used for outputs that are clipped or convex by construction.
    pub(crate) fn from_raw_unchecked(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height * 3);
        debug_assert!(data.iter().all(|v| (0.0..=1.0).contains(v)));
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

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_raw(self) -> Vec<f64> {
        self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn pixels(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(3)
    }

    /// Applies `f` to every pixel and clips the result to `[0, 1]`.
    pub fn map_clipped(&self, mut f: impl FnMut([f64; 3]) -> [f64; 3]) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for px in self.data.chunks_exact(3) {
            let out = f([px[0], px[1], px[2]]);
            data.extend(out.iter().map(|v| v.clamp(0.0, 1.0)));
        }
        Self::from_raw_unchecked(self.width, self.height, data)
    }
}

/// Per-channel mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelStats {
    pub mean: [f64; 3],
    pub stddev: [f64; 3],
}

impl ChannelStats {
    /// Statistics of an interleaved three-channel buffer.
    pub fn from_interleaved(data: &[f64]) -> Self {
        let n = (data.len() / 3).max(1) as f64;
        let mut mean = [0.0; 3];
        for px in data.chunks_exact(3) {
            for c in 0..3 {
                mean[c] += px[c];
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = [0.0; 3];
        for px in data.chunks_exact(3) {
            for c in 0..3 {
                let d = px[c] - mean[c];
                var[c] += d * d;
            }
        }
        let stddev = var.map(|v| (v / n).sqrt());
        Self { mean, stddev }
    }
}

pub(crate) fn check_shape(width: usize, height: usize, channels: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::EmptyImage { width, height });
    }
    if len != width * height * channels {
        return Err(Error::BufferLength {
            width,
            height,
            channels,
            actual: len,
        });
    }
    Ok(())
}

pub(crate) fn check_unit_range(data: &[f64]) -> Result<()> {
    match data.iter().position(|v| !(0.0..=1.0).contains(v)) {
        Some(index) => Err(Error::ValueOutOfRange {
            index,
            value: data[index],
        }),
        None => Ok(()),
    }
}
