//! Segmentation metrics: micro-averaged IoU, boundary-band (trimap) IoU curves
//! and gray-level histogram comparison.

mod histogram;
mod iou;
mod plot;
mod trimap;

pub use histogram::{gray_level, histogram_divergence, intensity_histogram, Histogram, GRAY_LEVELS};
pub use iou::{accumulate_confusion, iou, write_iou_csv, ConfusionCounts, IouReport};
pub use plot::{svg_line_plot, Series};
pub use trimap::{boundary_mask, build_trimap, chebyshev_distance, iou_vs_trimap_curve, write_curve_csv, Trimap};

use std::path::Path;

use crate::error::{Error, Result};
use crate::labels::{SemanticClass, NUM_CLASSES};

/// Per-pixel class ids, row-major from the top-left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    pub width: usize,
    pub height: usize,
    pub ids: Vec<u8>,
}

impl LabelMap {
    pub fn new(width: usize, height: usize, ids: Vec<u8>) -> Result<Self> {
        if ids.len() != width * height {
            return Err(Error::Config(format!(
                "{} label ids for a {width}x{height} map",
                ids.len()
            )));
        }
        if let Some(bad) = ids.iter().find(|&&i| i as usize >= NUM_CLASSES) {
            return Err(Error::Config(format!("label id {bad} outside the palette")));
        }
        Ok(Self { width, height, ids })
    }

    pub fn uniform(width: usize, height: usize, class: SemanticClass) -> Self {
        Self {
            width,
            height,
            ids: vec![class.id(); width * height],
        }
    }

    pub fn from_classes(width: usize, height: usize, classes: &[SemanticClass]) -> Result<Self> {
        Self::new(width, height, classes.iter().map(|c| c.id()).collect())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.ids[y * self.width + x]
    }

    pub fn read_png(path: &Path) -> Result<Self> {
        let (w, h, ids) = crate::render::read_label_png(path)?;
        Self::new(w, h, ids)
    }

    pub fn write_png(&self, path: &Path) -> Result<()> {
        crate::render::write_label_png(path, self.width, self.height, &self.ids)
    }
}

fn check_same_size(a: &LabelMap, b: &LabelMap) -> Result<()> {
    if (a.width, a.height) != (b.width, b.height) {
        return Err(Error::DimensionMismatch(a.width, a.height, b.width, b.height));
    }
    Ok(())
}
