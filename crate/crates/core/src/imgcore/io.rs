//! 8-bit PNG decode/encode. Decoding maps `v -> v / 255`; encoding rounds
//! `v * 255` half away from zero.

use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, GrayImage, ImageFormat};

use super::RgbImage;
use crate::error::Result;
use crate::matting::{AlphaMatte, Trimap};

pub fn to_u8(v: f64) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

pub fn from_u8(v: u8) -> f64 {
    f64::from(v) / 255.0
}

pub fn rgb_from_dynamic(img: &DynamicImage) -> RgbImage {
    let rgb = img.to_rgb8();
    let (w, h) = rgb.dimensions();
    let data = rgb.into_raw().into_iter().map(from_u8).collect();
    RgbImage::from_raw_unchecked(w as usize, h as usize, data)
}

/// Single-channel matte from a decoded image. Images carrying an alpha
/// channel (RGBA cut-outs) contribute that channel; otherwise luma is used.
pub fn alpha_from_dynamic(img: &DynamicImage) -> AlphaMatte {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data = if img.color().has_alpha() {
        img.to_rgba8().pixels().map(|p| from_u8(p.0[3])).collect()
    } else {
        img.to_luma8().into_raw().into_iter().map(from_u8).collect()
    };
    AlphaMatte::from_raw_unchecked(w, h, data)
}

pub fn load_rgb(path: impl AsRef<Path>) -> Result<RgbImage> {
    Ok(rgb_from_dynamic(&image::open(path)?))
}

pub fn load_alpha(path: impl AsRef<Path>) -> Result<AlphaMatte> {
    Ok(alpha_from_dynamic(&image::open(path)?))
}

pub fn load_trimap(path: impl AsRef<Path>) -> Result<Trimap> {
    let gray = image::open(path)?.to_luma8();
    let (w, h) = gray.dimensions();
    Trimap::decode(w as usize, h as usize, gray.as_raw())
}

pub fn rgb_to_image(img: &RgbImage) -> image::RgbImage {
    let raw = img.data().iter().map(|v| to_u8(*v)).collect();
    image::RgbImage::from_raw(img.width() as u32, img.height() as u32, raw)
        .expect("buffer length checked by RgbImage")
}

pub fn alpha_to_image(alpha: &AlphaMatte) -> GrayImage {
    let raw = alpha.data().iter().map(|v| to_u8(*v)).collect();
    GrayImage::from_raw(alpha.width() as u32, alpha.height() as u32, raw)
        .expect("buffer length checked by AlphaMatte")
}

pub fn trimap_to_image(trimap: &Trimap) -> GrayImage {
    GrayImage::from_raw(trimap.width() as u32, trimap.height() as u32, trimap.encode())
        .expect("buffer length checked by Trimap")
}

pub fn encode_png_rgb(img: &RgbImage) -> Result<Vec<u8>> {
    encode(DynamicImage::ImageRgb8(rgb_to_image(img)))
}

pub fn encode_png_alpha(alpha: &AlphaMatte) -> Result<Vec<u8>> {
    encode(DynamicImage::ImageLuma8(alpha_to_image(alpha)))
}

pub fn encode_png_trimap(trimap: &Trimap) -> Result<Vec<u8>> {
    encode(DynamicImage::ImageLuma8(trimap_to_image(trimap)))
}

fn encode(img: DynamicImage) -> Result<Vec<u8>> {
    let mut buf = Cursor::new(Vec::new());
    img.write_to(&mut buf, ImageFormat::Png)?;
    Ok(buf.into_inner())
}

pub fn save_rgb(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    rgb_to_image(img).save_with_format(path, ImageFormat::Png)?;
    Ok(())
}

pub fn save_alpha(alpha: &AlphaMatte, path: impl AsRef<Path>) -> Result<()> {
    alpha_to_image(alpha).save_with_format(path, ImageFormat::Png)?;
    Ok(())
}

pub fn save_trimap(trimap: &Trimap, path: impl AsRef<Path>) -> Result<()> {
    trimap_to_image(trimap).save_with_format(path, ImageFormat::Png)?;
    Ok(())
}
