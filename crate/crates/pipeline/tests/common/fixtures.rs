//! Synthetic portrait corpus: textured backgrounds with a soft-edged
//! head-and-shoulders silhouette.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hmh_core::imgcore::io;
use hmh_core::{AlphaMatte, RgbImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub fn portrait(rng: &mut ChaCha8Rng, w: usize, h: usize) -> (RgbImage, AlphaMatte) {
    let bg_a: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
    let bg_b: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
    let skin: [f64; 3] = [rng.gen_range(0.5..0.95), rng.gen_range(0.3..0.7), rng.gen_range(0.2..0.6)];
    let cloth: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
    let (cx, cy) = (w as f64 * rng.gen_range(0.4..0.6), h as f64 * rng.gen_range(0.3..0.45));
    let r = w.min(h) as f64 * rng.gen_range(0.15..0.25);
    let softness = rng.gen_range(1.5..4.0);
    let freq = rng.gen_range(0.05..0.2);

    let mut alpha = Vec::with_capacity(w * h);
    let mut data = Vec::with_capacity(w * h * 3);
    for y in 0..h {
        for x in 0..w {
            let (fx, fy) = (x as f64, y as f64);
            // signed distance-ish: head disc union shoulders below it
            let head = ((fx - cx).powi(2) + (fy - cy).powi(2)).sqrt() - r;
            let shoulders = if fy > cy + r * 0.8 { (fx - cx).abs() - r * 1.8 } else { f64::INFINITY };
            let d = head.min(shoulders);
            let hair = 0.5 * (fx * 0.7).sin() * (fy * 0.3).cos();
            let a = (0.5 - (d + hair) / softness).clamp(0.0, 1.0);
            alpha.push(a);

            let t = 0.5 + 0.5 * (fx * freq).sin() * (fy * freq * 0.7).cos();
            let noise = rng.gen_range(-0.03..0.03);
            let fg = if fy > cy + r * 0.8 { cloth } else { skin };
            for c in 0..3 {
                let bg = bg_a[c] * t + bg_b[c] * (1.0 - t);
                let v = a * fg[c] + (1.0 - a) * bg + noise;
                data.push(v.clamp(0.0, 1.0));
            }
        }
    }
    (
        RgbImage::new(w, h, data).unwrap(),
        AlphaMatte::new(w, h, alpha).unwrap(),
    )
}

/// Writes `n` portraits under `<dir>/images` and `<dir>/alphas`.
pub fn write_corpus(dir: &Path, n: usize, seed: u64, w: usize, h: usize) {
    std::fs::create_dir_all(dir.join("images")).unwrap();
    std::fs::create_dir_all(dir.join("alphas")).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n {
        let (img, alpha) = portrait(&mut rng, w, h);
        io::save_rgb(&img, dir.join("images").join(format!("p{i:04}.png"))).unwrap();
        io::save_alpha(&alpha, dir.join("alphas").join(format!("p{i:04}.png"))).unwrap();
    }
}

fn walk(dir: &Path, out: &mut Vec<PathBuf>) {
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            walk(&p, out);
        } else {
            out.push(p);
        }
    }
}

/// SHA-256 of every file, keyed by path relative to `dir`.
pub fn digest_tree(dir: &Path) -> BTreeMap<String, String> {
    let mut files = Vec::new();
    walk(dir, &mut files);
    files
        .into_iter()
        .map(|p| {
            let rel = p.strip_prefix(dir).unwrap().to_string_lossy().replace('\\', "/");
            let bytes = std::fs::read(&p).unwrap();
            let hash: [u8; 32] = Sha256::digest(&bytes).into();
            (rel, hash.iter().map(|b| format!("{b:02x}")).collect())
        })
        .collect()
}
