use crate::real::Real;

use super::RgbImage;

/// RGB in `[0, 1]`, 3×3 mean per channel, 3×3 standard deviation per channel
/// and the row coordinate in `[0, 1]` (top to bottom).
pub const FEATURES: usize = 10;

/// Features of every pixel, row-major. Neighborhoods are clipped at the image
/// border and averaged over the pixels that remain.
pub fn pixel_features<T: Real>(img: &RgbImage) -> Vec<[T; FEATURES]> {
    let (w, h) = (img.width, img.height);
    let unit: Vec<[T; 3]> = img
        .pixels
        .iter()
        .map(|p| p.map(|c| T::from_u8(c).unwrap() / T::of(255.0)))
        .collect();
    let row_scale = if h > 1 { T::from_usize(h - 1).unwrap() } else { T::one() };
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let mut sum = [T::zero(); 3];
            let mut sq = [T::zero(); 3];
            let mut n = 0usize;
            for ny in y.saturating_sub(1)..(y + 2).min(h) {
                for nx in x.saturating_sub(1)..(x + 2).min(w) {
                    let v = unit[ny * w + nx];
                    for c in 0..3 {
                        sum[c] = sum[c] + v[c];
                        sq[c] = sq[c] + v[c] * v[c];
                    }
                    n += 1;
                }
            }
            let nf = T::from_usize(n).unwrap();
            let v = unit[y * w + x];
            let mut f = [T::zero(); FEATURES];
            for c in 0..3 {
                let mean = sum[c] / nf;
                f[c] = v[c];
                f[3 + c] = mean;
                f[6 + c] = (sq[c] / nf - mean * mean).max(T::zero()).sqrt();
            }
            f[9] = T::from_usize(y).unwrap() / row_scale;
            out.push(f);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_has_zero_spread() {
        let img = RgbImage::new(4, 3, vec![[51, 102, 255]; 12]).unwrap();
        let f = pixel_features::<f64>(&img);
        assert_eq!(f.len(), 12);
        for (i, v) in f.iter().enumerate() {
            assert_eq!(&v[..3], &[0.2, 0.4, 1.0]);
            assert!((v[3] - 0.2).abs() < 1e-15 && (v[5] - 1.0).abs() < 1e-15);
            assert!(v[6..9].iter().all(|&s| s < 1e-7));
            assert_eq!(v[9], (i / 4) as f64 / 2.0);
        }
    }
}
