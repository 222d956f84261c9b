//! Binary morphology on row-major boolean masks.

/// Dilation by a `(2r+1) x (2r+1)` square (Chebyshev ball of radius `r`),
/// computed as a horizontal then a vertical running-window pass.
pub(crate) fn dilate_square(mask: &[bool], width: usize, height: usize, radius: usize) -> Vec<bool> {
    if radius == 0 {
        return mask.to_vec();
    }
    let horizontal = pass(mask, width, height, radius, true);
    pass(&horizontal, width, height, radius, false)
}

fn pass(mask: &[bool], width: usize, height: usize, radius: usize, along_x: bool) -> Vec<bool> {
    let (len, lines) = if along_x { (width, height) } else { (height, width) };
    let idx = |line: usize, i: usize| {
        if along_x {
            line * width + i
        } else {
            i * width + line
        }
    };
    let mut out = vec![false; mask.len()];
    for line in 0..lines {
        // count of set pixels inside the window [i - r, i + r]
        let mut count = (0..=radius.min(len - 1))
            .filter(|&i| mask[idx(line, i)])
            .count();
        for i in 0..len {
            out[idx(line, i)] = count > 0;
            if i + radius + 1 < len && mask[idx(line, i + radius + 1)] {
                count += 1;
            }
            if i >= radius && mask[idx(line, i - radius)] {
                count -= 1;
            }
        }
    }
    out
}
