//! Slow, straightforward reference implementations used to cross-check the
//! library. Nothing here calls into the metric code under test.

/// Naive double-loop MSE over unknown pixels.
pub fn mse(pred: &[f64], gt: &[f64], unknown: &[bool], w: usize, h: usize) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if unknown[i] {
                sum += (pred[i] - gt[i]).powi(2);
                n += 1;
            }
        }
    }
    sum / n as f64
}

/// Naive double-loop SAD over unknown pixels, in thousands.
pub fn sad(pred: &[f64], gt: &[f64], unknown: &[bool], w: usize, h: usize) -> f64 {
    let mut sum = 0.0;
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if unknown[i] {
                sum += (pred[i] - gt[i]).abs();
            }
        }
    }
    sum / 1000.0
}

/// Mirror index into `0..n` with the edge sample repeated.
fn mirror(mut i: i64, n: i64) -> usize {
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - i - 1;
        } else {
            return i as usize;
        }
    }
}

/// Gradient magnitude by direct 2-D correlation with the full
/// `(2r+1) x (2r+1)` derivative-of-Gaussian kernels.
pub fn gradient_magnitude(a: &[f64], w: usize, h: usize, sigma: f64) -> Vec<f64> {
    let r = (4.0 * sigma).ceil() as i64;
    let g: Vec<f64> = (-r..=r).map(|k| (-(k * k) as f64 / (2.0 * sigma * sigma)).exp()).collect();
    let gsum: f64 = g.iter().sum();
    let g: Vec<f64> = g.iter().map(|v| v / gsum).collect();
    // derivative -g'(k) = k g(k) / sigma^2, rescaled so a unit ramp responds with 1
    let dg: Vec<f64> = (-r..=r).map(|k| k as f64 * g[(k + r) as usize] / (sigma * sigma)).collect();
    let ramp: f64 = (-r..=r).map(|k| k as f64 * dg[(k + r) as usize]).sum();
    let dg: Vec<f64> = dg.iter().map(|v| v / ramp).collect();

    let mut out = vec![0.0; w * h];
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let (mut gx, mut gy) = (0.0, 0.0);
            for j in -r..=r {
                for i in -r..=r {
                    let v = a[mirror(y + j, h as i64) * w + mirror(x + i, w as i64)];
                    let (ui, uj) = ((i + r) as usize, (j + r) as usize);
                    gx += dg[ui] * g[uj] * v;
                    gy += g[ui] * dg[uj] * v;
                }
            }
            out[y as usize * w + x as usize] = (gx * gx + gy * gy).sqrt();
        }
    }
    out
}

pub fn grad(pred: &[f64], gt: &[f64], unknown: &[bool], w: usize, h: usize, sigma: f64) -> f64 {
    let gp = gradient_magnitude(pred, w, h, sigma);
    let gg = gradient_magnitude(gt, w, h, sigma);
    let mut sum = 0.0;
    for i in 0..w * h {
        if unknown[i] {
            sum += (gp[i] - gg[i]).powi(2);
        }
    }
    sum / 1000.0
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Largest 4-connected component via union-find. Ties are broken the way a
/// raster-order labeller followed by `argmax` over label sizes breaks them:
/// the component with the earliest pixel wins.
fn largest_cc(mask: &[bool], w: usize, h: usize) -> Vec<bool> {
    let mut uf = UnionFind((0..w * h).collect());
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !mask[i] {
                continue;
            }
            if x + 1 < w && mask[i + 1] {
                uf.union(i, i + 1);
            }
            if y + 1 < h && mask[i + w] {
                uf.union(i, i + w);
            }
        }
    }
    let mut size = vec![0usize; w * h];
    for i in 0..w * h {
        if mask[i] {
            let r = uf.find(i);
            size[r] += 1;
        }
    }
    // roots are the smallest index of each component, so scanning in index
    // order with a strict comparison keeps the earliest on ties
    let mut best: Option<usize> = None;
    for i in 0..w * h {
        if size[i] > 0 && best.map_or(true, |b| size[i] > size[b]) {
            best = Some(i);
        }
    }
    match best {
        None => vec![false; w * h],
        Some(root) => (0..w * h).map(|i| mask[i] && uf.find(i) == root).collect(),
    }
}

/// Transcription of the widely used benchmark connectivity error:
/// `thresh = arange(0, 1 + step, step)`, `l = -1` sentinel, `phi = 1 - d [d >= theta]`.
pub fn conn(pred: &[f64], gt: &[f64], unknown: &[bool], w: usize, h: usize, step: f64, theta: f64) -> f64 {
    let mut thresh = Vec::new();
    let stop = 1.0 + step;
    let count = ((stop - 0.0) / step).ceil() as usize;
    for i in 0..count {
        thresh.push(0.0 + i as f64 * step);
    }
    let mut l_map = vec![-1.0; w * h];
    for i in 1..thresh.len() {
        let both: Vec<bool> = (0..w * h).map(|p| pred[p] >= thresh[i] && gt[p] >= thresh[i]).collect();
        let omega = largest_cc(&both, w, h);
        for p in 0..w * h {
            if l_map[p] == -1.0 && !omega[p] {
                l_map[p] = thresh[i - 1];
            }
        }
    }
    for v in l_map.iter_mut() {
        if *v == -1.0 {
            *v = 1.0;
        }
    }
    let mut sum = 0.0;
    for p in 0..w * h {
        let pd = pred[p] - l_map[p];
        let td = gt[p] - l_map[p];
        let pphi = 1.0 - pd * if pd >= theta { 1.0 } else { 0.0 };
        let tphi = 1.0 - td * if td >= theta { 1.0 } else { 0.0 };
        if unknown[p] {
            sum += (pphi - tphi).abs();
        }
    }
    sum / 1000.0
}

/// Two-pass population mean and standard deviation of each of three
/// interleaved channels.
pub fn channel_stats(data: &[f64]) -> ([f64; 3], [f64; 3]) {
    let n = (data.len() / 3) as f64;
    let mut mean = [0.0; 3];
    for px in data.chunks_exact(3) {
        for c in 0..3 {
            mean[c] += px[c];
        }
    }
    for m in mean.iter_mut() {
        *m /= n;
    }
    let mut var = [0.0; 3];
    for px in data.chunks_exact(3) {
        for c in 0..3 {
            var[c] += (px[c] - mean[c]).powi(2);
        }
    }
    (mean, var.map(|v| (v / n).sqrt()))
}
