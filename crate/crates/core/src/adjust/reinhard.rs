use crate::imgcore::{lalphabeta_to_rgb, rgb_to_lalphabeta, ChannelStats, LalphabetaImage, RgbImage};

/// Source channels with a smaller standard deviation are only mean-shifted.
pub const SIGMA_GUARD: f64 = 1e-6;

/// Matches per-channel lαβ mean and standard deviation of `source` to `target`
/// statistics. The returned buffer is the unclipped transfer result.
pub fn reinhard_transfer_lalphabeta(source: &LalphabetaImage, target: &ChannelStats) -> LalphabetaImage {
    let src = source.stats();
    let scale: [f64; 3] = std::array::from_fn(|c| {
        if src.stddev[c] < SIGMA_GUARD {
            1.0
        } else {
            target.stddev[c] / src.stddev[c]
        }
    });
    let data = source
        .data()
        .chunks_exact(3)
        .flat_map(|px| (0..3).map(move |c| (px[c] - src.mean[c]) * scale[c] + target.mean[c]))
        .collect();
    LalphabetaImage::new(source.width(), source.height(), data)
        .expect("affine map of finite values with finite coefficients")
}

/// Reinhard colour transfer of `source` towards the global colour statistics
/// of `target`. The images may differ in size.
pub fn reinhard_transfer(source: &RgbImage, target: &RgbImage) -> RgbImage {
    let target_stats = rgb_to_lalphabeta(target).stats();
    let moved = reinhard_transfer_lalphabeta(&rgb_to_lalphabeta(source), &target_stats);
    lalphabeta_to_rgb(&moved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> RgbImage {
        RgbImage::from_fn(w, h, |_, _| [rng.gen(), rng.gen(), rng.gen()]).unwrap()
    }

    /// Two-pass mean/variance computed independently of `ChannelStats`.
    fn oracle_stats(data: &[f64], channel: usize) -> (f64, f64) {
        let vals: Vec<f64> = data.iter().skip(channel).step_by(3).copied().collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        (mean, var.sqrt())
    }

    #[test]
    fn self_transfer_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let img = random_image(&mut rng, 9, 7);
        let out = reinhard_transfer(&img, &img);
        for (a, b) in img.data().iter().zip(out.data()) {
            assert!((a - b).abs() <= 1e-4);
        }
    }

    #[test]
    fn flat_source_takes_target_mean() {
        let gray = RgbImage::filled(4, 4, [0.5, 0.5, 0.5]).unwrap();
        let blue = RgbImage::filled(3, 5, [0.1, 0.2, 0.9]).unwrap();
        let out = reinhard_transfer(&gray, &blue);
        for px in out.pixels() {
            for (a, b) in px.iter().zip([0.1, 0.2, 0.9]) {
                assert!((a - b).abs() < 1e-3, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn pre_clip_statistics_match_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let src = random_image(&mut rng, 12, 10);
        let tgt = random_image(&mut rng, 7, 13);
        let tgt_lab = rgb_to_lalphabeta(&tgt);
        let out = reinhard_transfer_lalphabeta(&rgb_to_lalphabeta(&src), &tgt_lab.stats());
        for c in 0..3 {
            let (m_out, s_out) = oracle_stats(out.data(), c);
            let (m_tgt, s_tgt) = oracle_stats(tgt_lab.data(), c);
            assert!((m_out - m_tgt).abs() < 1e-6);
            assert!((s_out - s_tgt).abs() < 1e-6);
        }
    }

    #[test]
    fn per_channel_order_is_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let src = rgb_to_lalphabeta(&random_image(&mut rng, 8, 8));
        let tgt = rgb_to_lalphabeta(&random_image(&mut rng, 8, 8)).stats();
        let out = reinhard_transfer_lalphabeta(&src, &tgt);
        for c in 0..3 {
            let order = |d: &[f64]| {
                let mut idx: Vec<usize> = (0..64).collect();
                idx.sort_by(|&a, &b| d[a * 3 + c].total_cmp(&d[b * 3 + c]).then(a.cmp(&b)));
                idx
            };
            assert_eq!(order(src.data()), order(out.data()));
        }
    }
}
