use crate::labels::SemanticClass;
use crate::math::{Rgb, Vec3};
use crate::real::Real;

/// Display transform: Reinhard `x / (1 + x)` per channel, gamma 1/2.2, then
/// rounding to 8 bits.
pub fn tonemap<T: Real>(x: T) -> u8 {
    let x = x.max(T::zero()).as_f64();
    let v = (x / (1.0 + x)).powf(1.0 / 2.2);
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

#[derive(Clone, Debug, PartialEq)]
pub struct Framebuffer<T> {
    pub width: usize,
    pub height: usize,
    /// Linear radiance, row-major from the top-left.
    pub linear: Vec<Rgb<T>>,
    /// Tonemapped 8-bit RGB.
    pub display: Vec<[u8; 3]>,
}

impl<T: Real> Framebuffer<T> {
    pub fn from_linear(width: usize, height: usize, linear: Vec<Rgb<T>>) -> Self {
        let display = linear
            .iter()
            .map(|c| [tonemap(c.r), tonemap(c.g), tonemap(c.b)])
            .collect();
        Self {
            width,
            height,
            linear,
            display,
        }
    }

    pub fn pixel(&self, x: usize, y: usize) -> Rgb<T> {
        self.linear[y * self.width + x]
    }
}

/// Per-pixel groundtruth from the deterministic center ray of each pixel.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundtruthBundle<T> {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<SemanticClass>,
    /// Distance along the view ray, meters; `+∞` for sky.
    pub depth: Vec<T>,
    /// Unit normal facing the camera; zero for sky.
    pub normals: Vec<Vec3<T>>,
}

impl<T: Real> GroundtruthBundle<T> {
    pub fn label_ids(&self) -> Vec<u8> {
        self.labels.iter().map(|c| c.id()).collect()
    }
}
