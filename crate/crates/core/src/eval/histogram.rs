use crate::error::{Error, Result};
use crate::real::Real;

pub const GRAY_LEVELS: usize = 256;

/// Rec.601 luma of an 8-bit RGB pixel, rounded half up.
pub fn gray_level(p: [u8; 3]) -> u8 {
    let [r, g, b] = p.map(u32::from);
    ((299 * r + 587 * g + 114 * b + 500) / 1000) as u8
}

/// Normalized gray-level histogram; bin `i` holds the mass of gray level `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram<T> {
    pub mass: Vec<T>,
}

impl<T: Real> Histogram<T> {
    pub fn from_counts(counts: &[u64]) -> Self {
        let total: u64 = counts.iter().sum();
        let t = T::from_u64(total.max(1)).unwrap();
        Self {
            mass: counts.iter().map(|&c| T::from_u64(c).unwrap() / t).collect(),
        }
    }

    pub fn bins(&self) -> usize {
        self.mass.len()
    }
}

/// Gray levels pooled over every pixel of every image in the set.
pub fn intensity_histogram<T: Real>(images: &[&[[u8; 3]]]) -> Result<Histogram<T>> {
    if images.is_empty() || images.iter().all(|im| im.is_empty()) {
        return Err(Error::EmptyImageSet);
    }
    let mut counts = [0u64; GRAY_LEVELS];
    for im in images {
        for &p in *im {
            counts[gray_level(p) as usize] += 1;
        }
    }
    Ok(Histogram::from_counts(&counts))
}

/// Total variation distance `½ Σ |a − b|`.
pub fn histogram_divergence<T: Real>(a: &Histogram<T>, b: &Histogram<T>) -> Result<T> {
    if a.bins() != b.bins() {
        return Err(Error::BinMismatch(a.bins(), b.bins()));
    }
    let sum: T = a.mass.iter().zip(&b.mass).map(|(&x, &y)| (x - y).abs()).sum();
    Ok(sum * T::of(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pooled_extremes() {
        let black = vec![[0u8; 3]; 16];
        let white = vec![[255u8; 3]; 16];
        let h: Histogram<f64> = intensity_histogram(&[&black, &white]).unwrap();
        assert_eq!(h.mass[0], 0.5);
        assert_eq!(h.mass[255], 0.5);
        let only_black: Histogram<f64> = intensity_histogram(&[&black]).unwrap();
        assert_eq!(histogram_divergence(&h, &only_black).unwrap(), 0.5);
        assert_eq!(histogram_divergence(&h, &h).unwrap(), 0.0);
        let only_white: Histogram<f64> = intensity_histogram(&[&white]).unwrap();
        assert_eq!(histogram_divergence(&only_black, &only_white).unwrap(), 1.0);
    }

    #[test]
    fn gray_of_gray_is_itself_and_errors_surface() {
        for v in [0u8, 1, 127, 128, 254, 255] {
            assert_eq!(gray_level([v, v, v]), v);
        }
        assert!(intensity_histogram::<f64>(&[]).is_err());
        let a = Histogram::<f64> { mass: vec![1.0] };
        let b = Histogram::<f64> { mass: vec![0.5, 0.5] };
        assert!(histogram_divergence(&a, &b).is_err());
    }
}
