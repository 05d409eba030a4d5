use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::real::Real;

use super::{accumulate_confusion, check_same_size, iou, ConfusionCounts, LabelMap};

/// Pixels within a band around groundtruth label edges.
///
/// A boundary pixel has a 4-neighbor with a different id, so an edge between
/// two regions marks one pixel on each side. The band of width `w` keeps every
/// pixel whose Chebyshev distance to a boundary pixel is at most `w - 1`,
/// which reaches `w` pixels to either side of the edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trimap {
    pub width: usize,
    pub height: usize,
    pub width_px: u32,
    pub mask: Vec<bool>,
}

impl Trimap {
    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    fn from_distance(gt: &LabelMap, dist: &[u32], width_px: u32) -> Self {
        Self {
            width: gt.width,
            height: gt.height,
            width_px,
            mask: dist.iter().map(|&d| d < width_px).collect(),
        }
    }
}

pub fn boundary_mask(gt: &LabelMap) -> Vec<bool> {
    let (w, h) = (gt.width, gt.height);
    let mut out = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            let id = gt.get(x, y);
            out[y * w + x] = (x > 0 && gt.get(x - 1, y) != id)
                || (x + 1 < w && gt.get(x + 1, y) != id)
                || (y > 0 && gt.get(x, y - 1) != id)
                || (y + 1 < h && gt.get(x, y + 1) != id);
        }
    }
    out
}

/// Exact Chebyshev distance to the nearest seed pixel (`u32::MAX` when there
/// is none). Two raster passes over the 8-neighborhood with unit steps give
/// the chessboard metric exactly.
pub fn chebyshev_distance(seeds: &[bool], width: usize, height: usize) -> Vec<u32> {
    const FAR: u32 = u32::MAX;
    let mut d: Vec<u32> = seeds.iter().map(|&s| if s { 0 } else { FAR }).collect();
    let step = |v: u32| v.saturating_add(1);
    for y in 0..height {
        for x in 0..width {
            let i = y * width + x;
            let mut best = d[i];
            if x > 0 {
                best = best.min(step(d[i - 1]));
            }
            if y > 0 {
                let up = i - width;
                best = best.min(step(d[up]));
                if x > 0 {
                    best = best.min(step(d[up - 1]));
                }
                if x + 1 < width {
                    best = best.min(step(d[up + 1]));
                }
            }
            d[i] = best;
        }
    }
    for y in (0..height).rev() {
        for x in (0..width).rev() {
            let i = y * width + x;
            let mut best = d[i];
            if x + 1 < width {
                best = best.min(step(d[i + 1]));
            }
            if y + 1 < height {
                let down = i + width;
                best = best.min(step(d[down]));
                if x > 0 {
                    best = best.min(step(d[down - 1]));
                }
                if x + 1 < width {
                    best = best.min(step(d[down + 1]));
                }
            }
            d[i] = best;
        }
    }
    d
}

pub fn build_trimap(gt: &LabelMap, width_px: u32) -> Result<Trimap> {
    if width_px == 0 {
        return Err(Error::Config("trimap width must be at least 1 pixel".into()));
    }
    let dist = chebyshev_distance(&boundary_mask(gt), gt.width, gt.height);
    Ok(Trimap::from_distance(gt, &dist, width_px))
}

fn saturates(gt: &LabelMap, width_px: u32) -> bool {
    let diag = ((gt.width * gt.width + gt.height * gt.height) as f64).sqrt();
    f64::from(width_px) >= diag
}

/// Micro-averaged mean IoU inside the band for each width. A width at least
/// as large as an image's diagonal covers that whole image, including images
/// without any label edge, so the last point of a saturating curve is the
/// unmasked mean IoU.
pub fn iou_vs_trimap_curve<T: Real>(
    preds: &[LabelMap],
    gts: &[LabelMap],
    widths: &[u32],
) -> Result<Vec<(u32, Option<T>)>> {
    if preds.len() != gts.len() {
        return Err(Error::Config(format!(
            "{} predictions for {} groundtruth maps",
            preds.len(),
            gts.len()
        )));
    }
    if widths.contains(&0) {
        return Err(Error::Config("trimap width must be at least 1 pixel".into()));
    }
    let mut totals = vec![ConfusionCounts::default(); widths.len()];
    for (pred, gt) in preds.iter().zip(gts) {
        check_same_size(pred, gt)?;
        let dist = chebyshev_distance(&boundary_mask(gt), gt.width, gt.height);
        for (total, &w) in totals.iter_mut().zip(widths) {
            *total += if saturates(gt, w) {
                accumulate_confusion(pred, gt, None)?
            } else {
                accumulate_confusion(pred, gt, Some(&Trimap::from_distance(gt, &dist, w)))?
            };
        }
    }
    Ok(widths.iter().zip(&totals).map(|(&w, c)| (w, iou::<T>(c).mean)).collect())
}

/// `width,mean_iou` rows; an empty band leaves the IoU column empty.
pub fn write_curve_csv<T: Real>(curve: &[(u32, Option<T>)], path: &Path) -> Result<()> {
    let mut s = String::from("width,mean_iou\n");
    for (w, v) in curve {
        let _ = writeln!(s, "{w},{}", v.map_or_else(String::new, |v| v.to_string()));
    }
    std::fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertical_split_width_two_masks_columns_three_to_six() {
        let ids = (0..100).map(|i| if i % 10 <= 4 { 0 } else { 2 }).collect();
        let gt = LabelMap::new(10, 10, ids).unwrap();
        let t = build_trimap(&gt, 2).unwrap();
        assert_eq!(t.count(), 40);
        for (i, &m) in t.mask.iter().enumerate() {
            assert_eq!(m, (3..=6).contains(&(i % 10)), "pixel {i}");
        }
    }

    #[test]
    fn uniform_map_has_no_band() {
        let gt = LabelMap::uniform(6, 4, crate::labels::SemanticClass::Sky);
        assert_eq!(build_trimap(&gt, 3).unwrap().count(), 0);
        assert!(build_trimap(&gt, 0).is_err());
    }
}
