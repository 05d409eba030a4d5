use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::real::Real;

use super::world::Ray;

/// Pinhole camera with +y up.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Camera<T> {
    pub position: Vec3<T>,
    pub look_at: Vec3<T>,
    /// Full vertical field of view, radians.
    pub vertical_fov: T,
    pub width: usize,
    pub height: usize,
}

impl<T: Real> Camera<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.vertical_fov > T::zero() && self.vertical_fov < T::PI()) {
            return Err(Error::Camera(format!("vertical fov {} outside (0, pi)", self.vertical_fov)));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::Camera(format!("resolution {}x{} is empty", self.width, self.height)));
        }
        let f = self.look_at - self.position;
        if !f.is_finite() || !self.position.is_finite() || !(f.length() > T::zero()) {
            return Err(Error::Camera("look_at must differ from position".into()));
        }
        if f.normalized().cross(Vec3::unit_y()).length() < T::of(1e-6) {
            return Err(Error::Camera("view direction is parallel to the up axis".into()));
        }
        Ok(())
    }

    fn frame(&self) -> (Vec3<T>, Vec3<T>, Vec3<T>) {
        let forward = (self.look_at - self.position).normalized();
        let right = forward.cross(Vec3::unit_y()).normalized();
        let up = right.cross(forward);
        (forward, right, up)
    }

    /// Ray through image position `(px, py)` in pixel units; `(0, 0)` is the
    /// top-left corner of the image, pixel centers sit at half-integers.
    pub fn ray(&self, px: T, py: T) -> Ray<T> {
        let (forward, right, up) = self.frame();
        let half_h = (self.vertical_fov * T::of(0.5)).tan();
        let w = T::from_usize(self.width).unwrap();
        let h = T::from_usize(self.height).unwrap();
        let half_w = half_h * w / h;
        let sx = (px / w * T::of(2.0) - T::one()) * half_w;
        let sy = (T::one() - py / h * T::of(2.0)) * half_h;
        Ray::new(self.position, (forward + right * sx + up * sy).normalized())
    }

    pub fn center_ray(&self, x: usize, y: usize) -> Ray<T> {
        let half = T::of(0.5);
        self.ray(T::from_usize(x).unwrap() + half, T::from_usize(y).unwrap() + half)
    }
}
