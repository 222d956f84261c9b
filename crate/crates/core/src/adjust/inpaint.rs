//! Fast-marching background inpainting (Telea-style propagation).
//!
//! The fill front advances from the mask boundary in order of arrival time
//! `T` (solution of `|grad T| = 1`). Each newly reached pixel takes a weighted
//! average of already-filled pixels within [`INPAINT_RADIUS`], weighted by
//! direction (alignment with `grad T`), geometric distance and level-set
//! distance. Only the zeroth-order term is used, so every filled value is a
//! convex combination of known values.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{check_dims, invalid, Error, Result};
use crate::imgcore::RgbImage;
use crate::matting::AlphaMatte;
use crate::morphology::dilate_square;

/// Neighbourhood radius (Euclidean, pixels) for the weighted average.
pub const INPAINT_RADIUS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Known,
    Band,
    Inside,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Front {
    time: f64,
    index: usize,
}

impl Eq for Front {}

impl Ord for Front {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time.total_cmp(&other.time).then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Front {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Recovers the background under the portrait.
///
/// The fill mask is `{alpha > 0}` dilated by a square of radius
/// `mask_dilation`. Pixels outside the mask are copied unchanged.
pub fn inpaint_background(img: &RgbImage, alpha: &AlphaMatte, mask_dilation: usize) -> Result<RgbImage> {
    check_dims(img.dims(), alpha.dims())?;
    let (w, h) = img.dims();
    let covered: Vec<bool> = alpha.data().iter().map(|&a| a > 0.0).collect();
    let mask = dilate_square(&covered, w, h, mask_dilation);
    if mask.iter().all(|&m| m) {
        return Err(Error::MaskCoversImage);
    }
    if !mask.iter().any(|&m| m) {
        return Ok(img.clone());
    }
    Ok(fast_march(img, &mask))
}

/// Fills `mask` pixels of `img`. At least one pixel must be unmasked.
pub fn inpaint_mask(img: &RgbImage, mask: &[bool]) -> Result<RgbImage> {
    if mask.len() != img.pixel_count() {
        return Err(invalid("mask", "length must match the image pixel count"));
    }
    if mask.iter().all(|&m| m) {
        return Err(Error::MaskCoversImage);
    }
    Ok(fast_march(img, mask))
}

fn fast_march(img: &RgbImage, mask: &[bool]) -> RgbImage {
    let (w, h) = img.dims();
    let mut data = img.data().to_vec();
    let mut state: Vec<State> = mask.iter().map(|&m| if m { State::Inside } else { State::Known }).collect();
    let mut time = vec![f64::INFINITY; w * h];
    let mut heap = BinaryHeap::new();

    // Initial front: known pixels 4-adjacent to the mask.
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if state[i] == State::Known {
                time[i] = 0.0;
                if neighbors4(x, y, w, h).any(|(nx, ny)| mask[ny * w + nx]) {
                    state[i] = State::Band;
                    heap.push(Reverse(Front { time: 0.0, index: i }));
                }
            }
        }
    }

    let offsets = disc_offsets(INPAINT_RADIUS);
    while let Some(Reverse(Front { index, .. })) = heap.pop() {
        if state[index] == State::Known {
            continue;
        }
        state[index] = State::Known;
        let (x, y) = (index % w, index / w);
        for (nx, ny) in neighbors4(x, y, w, h) {
            let n = ny * w + nx;
            if state[n] != State::Inside {
                continue;
            }
            let t = solve_eikonal(nx, ny, w, h, &time, &state);
            time[n] = t;
            fill_pixel(nx, ny, w, h, &offsets, &time, &state, &mut data);
            state[n] = State::Band;
            heap.push(Reverse(Front { time: t, index: n }));
        }
    }
    // Every masked pixel is reachable because some pixel is known; the
    // 4-connected grid is connected.
    debug_assert!(state.iter().all(|s| *s == State::Known));
    RgbImage::from_raw_unchecked(w, h, data)
}

fn neighbors4(x: usize, y: usize, w: usize, h: usize) -> impl Iterator<Item = (usize, usize)> {
    let candidates = [
        (x.wrapping_sub(1), y),
        (x + 1, y),
        (x, y.wrapping_sub(1)),
        (x, y + 1),
    ];
    candidates.into_iter().filter(move |&(cx, cy)| cx < w && cy < h)
}

fn disc_offsets(radius: usize) -> Vec<(isize, isize)> {
    let r = radius as isize;
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if (dx, dy) != (0, 0) && dx * dx + dy * dy <= r * r {
                out.push((dx, dy));
            }
        }
    }
    out
}

/// Upwind solution of `|grad T| = 1` from frozen (non-inside) neighbours.
fn solve_eikonal(x: usize, y: usize, w: usize, h: usize, time: &[f64], state: &[State]) -> f64 {
    let frozen = |cx: usize, cy: usize| -> f64 {
        if cx < w && cy < h && state[cy * w + cx] != State::Inside {
            time[cy * w + cx]
        } else {
            f64::INFINITY
        }
    };
    let a = frozen(x.wrapping_sub(1), y).min(frozen(x + 1, y));
    let b = frozen(x, y.wrapping_sub(1)).min(frozen(x, y + 1));
    match (a.is_finite(), b.is_finite()) {
        (true, true) if (a - b).abs() < 1.0 => {
            let d = a - b;
            (a + b + (2.0 - d * d).sqrt()) / 2.0
        }
        (true, true) => a.min(b) + 1.0,
        (true, false) => a + 1.0,
        (false, true) => b + 1.0,
        (false, false) => unreachable!("pixel reached from a frozen neighbour"),
    }
}

/// Central-difference gradient of `T` using only frozen samples.
fn time_gradient(x: usize, y: usize, w: usize, h: usize, time: &[f64], state: &[State]) -> (f64, f64) {
    let at = |cx: usize, cy: usize| -> Option<f64> {
        (cx < w && cy < h && state[cy * w + cx] != State::Inside).then(|| time[cy * w + cx])
    };
    let t0 = time[y * w + x];
    let axis = |lo: Option<f64>, hi: Option<f64>| match (lo, hi) {
        (Some(l), Some(r)) => (r - l) / 2.0,
        (Some(l), None) => t0 - l,
        (None, Some(r)) => r - t0,
        (None, None) => 0.0,
    };
    (
        axis(at(x.wrapping_sub(1), y), at(x + 1, y)),
        axis(at(x, y.wrapping_sub(1)), at(x, y + 1)),
    )
}

#[allow(clippy::too_many_arguments)]
fn fill_pixel(
    x: usize,
    y: usize,
    w: usize,
    h: usize,
    offsets: &[(isize, isize)],
    time: &[f64],
    state: &[State],
    data: &mut [f64],
) {
    let (gx, gy) = time_gradient(x, y, w, h, time, state);
    let t_here = time[y * w + x];
    let mut acc = [0.0; 3];
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    let mut total = 0.0;
    for &(dx, dy) in offsets {
        let (qx, qy) = (x as isize + dx, y as isize + dy);
        if qx < 0 || qy < 0 || qx >= w as isize || qy >= h as isize {
            continue;
        }
        let q = qy as usize * w + qx as usize;
        if state[q] == State::Inside {
            continue;
        }
        // r points from the filled neighbour towards the pixel being filled
        let (rx, ry) = (-dx as f64, -dy as f64);
        let len2 = rx * rx + ry * ry;
        let dir = ((rx * gx + ry * gy) / len2.sqrt()).abs().max(1e-6);
        let dst = 1.0 / len2;
        let lev = 1.0 / (1.0 + (time[q] - t_here).abs());
        let weight = dir * dst * lev;
        for c in 0..3 {
            let v = data[q * 3 + c];
            acc[c] += weight * v;
            lo[c] = lo[c].min(v);
            hi[c] = hi[c].max(v);
        }
        total += weight;
    }
    debug_assert!(total > 0.0);
    for c in 0..3 {
        // convex combination; the clamp only absorbs rounding
        data[(y * w + x) * 3 + c] = (acc[c] / total).clamp(lo[c], hi[c]);
    }
}
