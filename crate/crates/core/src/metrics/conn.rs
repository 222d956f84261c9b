use std::collections::VecDeque;

use super::{unknown_region, REPORT_SCALE};
use crate::error::{invalid, Result};
use crate::matting::{AlphaMatte, Trimap};

pub const CONN_STEP: f64 = 0.1;
pub const CONN_THETA: f64 = 0.15;

/// Threshold sweep `0, step, 2 step, ...` up to and including 1.
///
/// For steps that divide 1 (such as the default 0.1) this is the sequence used
/// by the common benchmark tooling. A step above 1 leaves only `t = 0`, in
/// which case no pixel ever leaves the source region and the error is 0.
pub fn connectivity_thresholds(step: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(invalid("step", format!("must be finite and > 0, got {step}")));
    }
    let count = (1.0 / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| k as f64 * step).collect())
}

/// Largest 4-connected component of `mask`. Ties go to the component whose
/// first pixel comes first in raster order. All-false when `mask` is empty.
pub fn largest_component(mask: &[bool], width: usize, height: usize) -> Vec<bool> {
    let mut label = vec![0u32; mask.len()];
    let mut best = (0usize, 0u32);
    let mut next = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..mask.len() {
        if !mask[start] || label[start] != 0 {
            continue;
        }
        next += 1;
        label[start] = next;
        queue.push_back(start);
        let mut size = 0usize;
        while let Some(i) = queue.pop_front() {
            size += 1;
            let (x, y) = (i % width, i / width);
            let mut visit = |j: usize| {
                if mask[j] && label[j] == 0 {
                    label[j] = next;
                    queue.push_back(j);
                }
            };
            if x > 0 {
                visit(i - 1);
            }
            if x + 1 < width {
                visit(i + 1);
            }
            if y > 0 {
                visit(i - width);
            }
            if y + 1 < height {
                visit(i + width);
            }
        }
        if size > best.0 {
            best = (size, next);
        }
    }
    label.iter().map(|&l| l != 0 && l == best.1).collect()
}

/// Connectivity error.
///
/// For each threshold `t_i` (i >= 1) both mattes are binarized at `>= t_i`
/// and the largest 4-connected component of their intersection is kept.
/// A pixel's level `l(p)` is the threshold preceding the first one at which it
/// falls outside that component (1 if it never does). With
/// `d = alpha - l`, the connectivity degree is `phi = 1 - d * [d >= theta]`,
/// and the error is the sum over unknown pixels of `|phi_pred - phi_gt|`,
/// divided by 1000.
pub fn conn_error(pred: &AlphaMatte, gt: &AlphaMatte, trimap: &Trimap, step: f64, theta: f64) -> Result<f64> {
    let mask = unknown_region(pred, gt, trimap)?;
    if !(theta.is_finite() && theta > 0.0 && theta < 1.0) {
        return Err(invalid("theta", format!("must lie in (0, 1), got {theta}")));
    }
    let thresholds = connectivity_thresholds(step)?;
    let (w, h) = pred.dims();
    let mut level: Vec<Option<f64>> = vec![None; w * h];
    for pair in thresholds.windows(2) {
        let (prev, t) = (pair[0], pair[1]);
        let both: Vec<bool> = pred
            .data()
            .iter()
            .zip(gt.data())
            .map(|(&p, &g)| p >= t && g >= t)
            .collect();
        let omega = largest_component(&both, w, h);
        for (l, in_omega) in level.iter_mut().zip(omega) {
            if l.is_none() && !in_omega {
                *l = Some(prev);
            }
        }
    }
    let phi = |alpha: f64, l: f64| {
        let d = alpha - l;
        if d >= theta {
            1.0 - d
        } else {
            1.0
        }
    };
    let sum: f64 = (0..w * h)
        .filter(|&i| mask[i])
        .map(|i| {
            let l = level[i].unwrap_or(1.0);
            (phi(pred.data()[i], l) - phi(gt.data()[i], l)).abs()
        })
        .sum();
    Ok(sum / REPORT_SCALE)
}
