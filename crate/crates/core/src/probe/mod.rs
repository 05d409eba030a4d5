//! Per-pixel Gaussian naive Bayes classifier over simple color and
//! neighborhood features. It is fast and deterministic, and it is sensitive to
//! the same appearance shifts between image sets that the experiments measure.

mod features;
mod model;

pub use features::{pixel_features, FEATURES};
pub use model::{fine_tune, predict, train, ClassStats, GaussianClassModel, MODEL_VERSION, VARIANCE_FLOOR};

use std::path::Path;

use crate::error::{Error, Result};
use crate::eval::LabelMap;

/// 8-bit display RGB image, row-major from the top-left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Config(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn read_png(path: &Path) -> Result<Self> {
        let (w, h, px) = crate::render::read_rgb_png(path)?;
        Self::new(w, h, px)
    }

    pub fn write_png(&self, path: &Path) -> Result<()> {
        crate::render::write_rgb_png(path, self.width, self.height, &self.pixels)
    }
}

/// An image with its pixel-aligned groundtruth labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledImage {
    pub image: RgbImage,
    pub labels: LabelMap,
}

impl LabeledImage {
    pub fn new(image: RgbImage, labels: LabelMap) -> Result<Self> {
        if (image.width, image.height) != (labels.width, labels.height) {
            return Err(Error::DimensionMismatch(image.width, image.height, labels.width, labels.height));
        }
        Ok(Self { image, labels })
    }
}
