use super::{unknown_region, REPORT_SCALE};
use crate::error::{invalid, Result};
use crate::matting::{AlphaMatte, Trimap};

pub const GRAD_SIGMA: f64 = 1.4;

/// Truncation radius in units of sigma.
const TRUNCATE: f64 = 4.0;

/// Sampled 1-D Gaussian and its first derivative, both of radius `ceil(4 sigma)`.
///
/// The smoothing taps sum to 1. The derivative taps are `k * g(k)` scaled so a
/// unit ramp has unit response away from borders.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianDerivative {
    pub radius: usize,
    pub smooth: Vec<f64>,
    pub derivative: Vec<f64>,
}

impl GaussianDerivative {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(invalid("sigma", format!("must be finite and > 0, got {sigma}")));
        }
        let radius = (TRUNCATE * sigma).ceil() as usize;
        let offsets: Vec<f64> = (0..=2 * radius).map(|i| i as f64 - radius as f64).collect();
        let raw: Vec<f64> = offsets.iter().map(|k| (-k * k / (2.0 * sigma * sigma)).exp()).collect();
        let norm: f64 = raw.iter().sum();
        let smooth: Vec<f64> = raw.iter().map(|g| g / norm).collect();
        let moment: f64 = offsets.iter().zip(&smooth).map(|(k, g)| k * k * g).sum();
        let derivative = offsets.iter().zip(&smooth).map(|(k, g)| k * g / moment).collect();
        Ok(Self {
            radius,
            smooth,
            derivative,
        })
    }
}

/// Half-sample symmetric reflection (`d c b a | a b c d | d c b a`), valid for any offset.
pub(crate) fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let period = 2 * n;
    let m = i.rem_euclid(period);
    (if m < n { m } else { period - 1 - m }) as usize
}

/// Correlates every row (`along_x`) or column with `taps`.
///
/// Antisymmetric taps are applied as `t[j] * (v[+j] - v[-j])`, which makes the
/// response to a constant signal exactly zero.
fn correlate_axis(data: &[f64], w: usize, h: usize, taps: &[f64], along_x: bool) -> Vec<f64> {
    let r = taps.len() / 2;
    let antisymmetric = taps[r] == 0.0 && (1..=r).all(|j| taps[r + j] == -taps[r - j]);
    let sample = |x: usize, y: usize, off: isize| {
        if along_x {
            data[y * w + reflect(x as isize + off, w)]
        } else {
            data[reflect(y as isize + off, h) * w + x]
        }
    };
    let mut out = vec![0.0; data.len()];
    for y in 0..h {
        for x in 0..w {
            let acc: f64 = if antisymmetric {
                (1..=r)
                    .map(|j| taps[r + j] * (sample(x, y, j as isize) - sample(x, y, -(j as isize))))
                    .sum()
            } else {
                taps.iter()
                    .enumerate()
                    .map(|(j, t)| t * sample(x, y, j as isize - r as isize))
                    .sum()
            };
            out[y * w + x] = acc;
        }
    }
    out
}

/// Per-pixel `|grad alpha|` from separable Gaussian-derivative filtering with reflective borders.
pub fn gaussian_gradient_magnitude(alpha: &AlphaMatte, sigma: f64) -> Result<Vec<f64>> {
    let k = GaussianDerivative::new(sigma)?;
    let (w, h) = alpha.dims();
    let gx = correlate_axis(
        &correlate_axis(alpha.data(), w, h, &k.derivative, true),
        w,
        h,
        &k.smooth,
        false,
    );
    let gy = correlate_axis(
        &correlate_axis(alpha.data(), w, h, &k.smooth, true),
        w,
        h,
        &k.derivative,
        false,
    );
    Ok(gx.iter().zip(&gy).map(|(a, b)| a.hypot(*b)).collect())
}

/// Sum over unknown pixels of `(|grad pred| - |grad gt|)^2`, divided by 1000.
pub fn grad_error(pred: &AlphaMatte, gt: &AlphaMatte, trimap: &Trimap, sigma: f64) -> Result<f64> {
    let mask = unknown_region(pred, gt, trimap)?;
    let gp = gaussian_gradient_magnitude(pred, sigma)?;
    let gg = gaussian_gradient_magnitude(gt, sigma)?;
    let sum: f64 = gp
        .iter()
        .zip(&gg)
        .zip(&mask)
        .filter(|(_, m)| **m)
        .map(|((p, g), _)| (p - g) * (p - g))
        .sum();
    Ok(sum / REPORT_SCALE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matting::TrimapLabel;

    #[test]
    fn kernel_shape() {
        let k = GaussianDerivative::new(1.4).unwrap();
        assert_eq!(k.radius, 6);
        assert_eq!(k.smooth.len(), 13);
        assert!((k.smooth.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(k.derivative.iter().sum::<f64>().abs() < 1e-15);
        assert!(GaussianDerivative::new(0.0).is_err());
    }

    #[test]
    fn reflection_indices() {
        let got: Vec<usize> = (-4..8).map(|i| reflect(i, 4)).collect();
        assert_eq!(got, vec![3, 2, 1, 0, 0, 1, 2, 3, 3, 2, 1, 0]);
        assert_eq!(reflect(-3, 1), 0);
        assert_eq!(reflect(5, 2), 1);
        assert_eq!(reflect(4, 2), 0);
    }

    #[test]
    fn unit_ramp_has_unit_gradient() {
        let a = AlphaMatte::from_fn(40, 20, |x, _| x as f64 / 40.0).unwrap();
        let g = gaussian_gradient_magnitude(&a, 1.4).unwrap();
        // interior: slope 1/40
        assert!((g[10 * 40 + 20] - 1.0 / 40.0).abs() < 1e-12);
    }

    #[test]
    fn constants_have_no_gradient() {
        let t = crate::matting::Trimap::filled(6, 5, TrimapLabel::Unknown).unwrap();
        let a = AlphaMatte::filled(6, 5, 0.2).unwrap();
        let b = AlphaMatte::filled(6, 5, 0.9).unwrap();
        assert_eq!(grad_error(&a, &b, &t, 1.4).unwrap(), 0.0);
    }
}
