use super::{check_shape, ChannelStats, RgbImage};
use crate::error::{Error, Result};

/// Floor applied to LMS responses before taking `log10`, so black pixels stay finite.
pub const LMS_FLOOR: f64 = 1e-4;

/// Reinhard et al. RGB -> LMS cone-response matrix.
const RGB_TO_LMS: [[f64; 3]; 3] = [
    [0.3811, 0.5783, 0.0402],
    [0.1967, 0.7244, 0.0782],
    [0.0241, 0.1288, 0.8444],
];

// Exact inverse of RGB_TO_LMS. The commonly printed 4-digit inverse is only
// accurate to ~1e-4 and would break round trips.
const LMS_TO_RGB: [[f64; 3]; 3] = invert3(RGB_TO_LMS);

const INV_SQRT3: f64 = 0.577_350_269_189_625_8;
const INV_SQRT6: f64 = 0.408_248_290_463_863;
const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

const fn invert3(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    let c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    let inv = 1.0 / det;
    [
        [
            c00 * inv,
            (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv,
            (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv,
        ],
        [
            c01 * inv,
            (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv,
            (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv,
        ],
        [
            c02 * inv,
            (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv,
            (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv,
        ],
    ]
}

#[inline]
fn mat_vec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

#[inline]
pub(crate) fn pixel_to_lalphabeta(rgb: [f64; 3]) -> [f64; 3] {
    let lms = mat_vec(&RGB_TO_LMS, rgb).map(|v| v.max(LMS_FLOOR).log10());
    let [l, m, s] = lms;
    [
        INV_SQRT3 * (l + m + s),
        INV_SQRT6 * (l + m - 2.0 * s),
        INV_SQRT2 * (l - m),
    ]
}

/// Inverse conversion without clipping.
#[inline]
pub(crate) fn pixel_from_lalphabeta(lab: [f64; 3]) -> [f64; 3] {
    let a = INV_SQRT3 * lab[0];
    let b = INV_SQRT6 * lab[1];
    let c = INV_SQRT2 * lab[2];
    let lms = [a + b + c, a + b - c, a - 2.0 * b].map(|v| 10f64.powf(v));
    mat_vec(&LMS_TO_RGB, lms)
}

/// Row-major image in Reinhard's decorrelated lαβ space. Values are unbounded but finite.
#[derive(Debug, Clone, PartialEq)]
pub struct LalphabetaImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl LalphabetaImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_shape(width, height, 3, data.len())?;
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::ValueOutOfRange {
                index,
                value: data[index],
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
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

    pub fn stats(&self) -> ChannelStats {
        ChannelStats::from_interleaved(&self.data)
    }
}

pub fn rgb_to_lalphabeta(img: &RgbImage) -> LalphabetaImage {
    let mut data = Vec::with_capacity(img.data().len());
    for px in img.pixels() {
        data.extend_from_slice(&pixel_to_lalphabeta([px[0], px[1], px[2]]));
    }
    LalphabetaImage {
        width: img.width(),
        height: img.height(),
        data,
    }
}

/// Converts back to RGB, clipping out-of-gamut values to `[0, 1]`.
pub fn lalphabeta_to_rgb(img: &LalphabetaImage) -> RgbImage {
    let mut data = Vec::with_capacity(img.data.len());
    for px in img.data.chunks_exact(3) {
        let rgb = pixel_from_lalphabeta([px[0], px[1], px[2]]);
        data.extend(rgb.iter().map(|v| clip_unit(*v)));
    }
    RgbImage::from_raw_unchecked(img.width, img.height, data)
}

#[inline]
fn clip_unit(v: f64) -> f64 {
    // powf overflow yields inf; NaN cannot arise from finite inputs
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}
