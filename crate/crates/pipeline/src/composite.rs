//! Test-time compositing onto a randomly chosen new background.

use std::path::{Path, PathBuf};

use hmh_core::adjust::stream_rng;
use hmh_core::imgcore::{io, Resample};
use hmh_core::matting::composite;
use hmh_core::{AlphaMatte, RgbImage};
use rand::Rng;

use crate::error::{Error, Result};
use crate::prepare::list_images;

/// Largest centred square of `img`.
pub fn center_square(img: &RgbImage) -> RgbImage {
    let side = img.width().min(img.height());
    let (x0, y0) = ((img.width() - side) / 2, (img.height() - side) / 2);
    let data = (y0..y0 + side)
        .flat_map(|y| (x0..x0 + side).flat_map(move |x| img.pixel(x, y)))
        .collect();
    RgbImage::new(side, side, data).expect("crop of a valid image")
}

/// Picks a background for `key` from the sorted candidate list. Undecodable
/// files are dropped and the draw repeated from the same stream.
pub fn pick_background(candidates: &[PathBuf], seed: u64, key: &str) -> Result<(PathBuf, RgbImage)> {
    let mut remaining: Vec<&PathBuf> = candidates.iter().collect();
    let mut rng = stream_rng(seed, "background", key);
    while !remaining.is_empty() {
        let i = rng.gen_range(0..remaining.len());
        match io::load_rgb(remaining[i]) {
            Ok(img) => return Ok((remaining[i].clone(), img)),
            Err(e) => {
                log::warn!("skipping undecodable background {}: {e}", remaining[i].display());
                remaining.remove(i);
            }
        }
    }
    Err(Error::Invalid("no decodable background image".into()))
}

pub fn list_backgrounds(dir: &Path) -> Result<Vec<PathBuf>> {
    let (found, _) = list_images(dir)?;
    if found.is_empty() {
        return Err(Error::Invalid(format!("background dir {} has no images", dir.display())));
    }
    Ok(found.into_values().collect())
}

/// `composite(I, alpha, crop_resize(new_background))`, with the background
/// chosen deterministically from `(seed, key)`.
pub fn composite_new_background(
    image: &RgbImage,
    alpha: &AlphaMatte,
    backgrounds: &[PathBuf],
    seed: u64,
    key: &str,
) -> Result<(PathBuf, RgbImage)> {
    let (path, bg) = pick_background(backgrounds, seed, key)?;
    let bg = center_square(&bg).resize_bilinear(image.width(), image.height())?;
    Ok((path, composite(image, alpha, &bg)?))
}
