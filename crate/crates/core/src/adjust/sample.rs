use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{AdjustmentKind, AdjustmentSpec};
use crate::error::{Error, Result};

/// Darkening factors, sampled jointly with [`ILLUMINATION_BRIGHT`].
pub const ILLUMINATION_DARK: (f64, f64) = (0.4, 0.75);
/// Brightening factors.
pub const ILLUMINATION_BRIGHT: (f64, f64) = (1.3, 1.8);
/// Saturation gain range.
pub const ENHANCE_RANGE: (f64, f64) = (1.4, 2.2);

/// Independent RNG stream keyed by `(seed, domain, key)`.
///
/// Streams depend only on their key, never on processing order, so parallel
/// runs reproduce sequential ones exactly.
pub fn stream_rng(seed: u64, domain: &str, key: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update((domain.len() as u64).to_le_bytes());
    hasher.update(domain.as_bytes());
    hasher.update(key.as_bytes());
    let digest: [u8; 32] = hasher.finalize().into();
    ChaCha8Rng::from_seed(digest)
}

/// Draws the background perturbation for one image.
///
/// The kind is uniform over the three perturbations. Colour transfer picks a
/// target uniformly from `target_pool` minus `image_id` (pool order matters;
/// callers should pass a canonical order). Illumination draws uniformly from
/// the union of the dark and bright ranges, which skips the near-identity band.
pub fn sample_adjustment(seed: u64, image_id: &str, target_pool: &[String]) -> Result<AdjustmentSpec> {
    if target_pool.is_empty() {
        return Err(Error::EmptyTargetPool { after_exclusion: false });
    }
    let mut rng = stream_rng(seed, "adjustment", image_id);
    let kind = AdjustmentKind::ALL[rng.gen_range(0..3)];
    match kind {
        AdjustmentKind::ColorTransfer => {
            let candidates: Vec<&String> = target_pool.iter().filter(|id| *id != image_id).collect();
            if candidates.is_empty() {
                return Err(Error::EmptyTargetPool { after_exclusion: true });
            }
            let target = candidates[rng.gen_range(0..candidates.len())];
            Ok(AdjustmentSpec::color_transfer(target.clone(), seed))
        }
        AdjustmentKind::Illumination => {
            let dark = ILLUMINATION_DARK.1 - ILLUMINATION_DARK.0;
            let bright = ILLUMINATION_BRIGHT.1 - ILLUMINATION_BRIGHT.0;
            let u = rng.gen_range(0.0..dark + bright);
            let factor = if u < dark {
                ILLUMINATION_DARK.0 + u
            } else {
                ILLUMINATION_BRIGHT.0 + (u - dark)
            };
            AdjustmentSpec::illumination(factor, seed)
        }
        AdjustmentKind::ColorEnhance => {
            let factor = rng.gen_range(ENHANCE_RANGE.0..=ENHANCE_RANGE.1);
            AdjustmentSpec::color_enhance(factor, seed)
        }
    }
}
