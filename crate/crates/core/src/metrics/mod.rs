//! Matting error metrics over the trimap unknown region, and MOS aggregation.
//!
//! SAD, Grad and Conn are reported divided by 1000, the conventional scale of
//! published matting benchmarks.

mod conn;
mod grad;
mod mos;

pub use conn::{conn_error, connectivity_thresholds, largest_component, CONN_STEP, CONN_THETA};
pub use grad::{gaussian_gradient_magnitude, grad_error, GaussianDerivative, GRAD_SIGMA};
pub use mos::{mos_aggregate, MosSummary, RaterScore};

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::matting::{AlphaMatte, Trimap};

/// Reporting scale applied to SAD, Grad and Conn.
pub const REPORT_SCALE: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MattingScore {
    pub mse: f64,
    pub sad: f64,
    pub grad: f64,
    pub conn: f64,
    pub unknown_pixel_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricParams {
    pub grad_sigma: f64,
    pub conn_step: f64,
    pub conn_theta: f64,
}

impl Default for MetricParams {
    fn default() -> Self {
        Self {
            grad_sigma: GRAD_SIGMA,
            conn_step: CONN_STEP,
            conn_theta: CONN_THETA,
        }
    }
}

/// Shape checks shared by every metric; returns the unknown indicator.
pub(crate) fn unknown_region(pred: &AlphaMatte, gt: &AlphaMatte, trimap: &Trimap) -> Result<Vec<bool>> {
    check_dims(pred.dims(), gt.dims())?;
    check_dims(pred.dims(), trimap.dims())?;
    let mask = trimap.unknown_mask();
    if !mask.iter().any(|&m| m) {
        return Err(Error::EmptyUnknownRegion);
    }
    Ok(mask)
}

/// Mean squared alpha error over unknown pixels.
pub fn mse_alpha(pred: &AlphaMatte, gt: &AlphaMatte, trimap: &Trimap) -> Result<f64> {
    let mask = unknown_region(pred, gt, trimap)?;
    let (sum, n) = masked(pred, gt, &mask)
        .map(|(p, g)| (p - g) * (p - g))
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    Ok(sum / n as f64)
}

/// Sum of absolute alpha differences over unknown pixels, divided by 1000.
pub fn sad_alpha(pred: &AlphaMatte, gt: &AlphaMatte, trimap: &Trimap) -> Result<f64> {
    let mask = unknown_region(pred, gt, trimap)?;
    let sum: f64 = masked(pred, gt, &mask).map(|(p, g)| (p - g).abs()).sum();
    Ok(sum / REPORT_SCALE)
}

fn masked<'a>(
    pred: &'a AlphaMatte,
    gt: &'a AlphaMatte,
    mask: &'a [bool],
) -> impl Iterator<Item = (f64, f64)> + 'a {
    pred.data()
        .iter()
        .zip(gt.data())
        .zip(mask)
        .filter(|(_, m)| **m)
        .map(|((p, g), _)| (*p, *g))
}

/// All four matting metrics for one image.
pub fn evaluate(pred: &AlphaMatte, gt: &AlphaMatte, trimap: &Trimap, params: &MetricParams) -> Result<MattingScore> {
    Ok(MattingScore {
        mse: mse_alpha(pred, gt, trimap)?,
        sad: sad_alpha(pred, gt, trimap)?,
        grad: grad_error(pred, gt, trimap, params.grad_sigma)?,
        conn: conn_error(pred, gt, trimap, params.conn_step, params.conn_theta)?,
        unknown_pixel_count: trimap.unknown_count(),
    })
}
