use crate::error::{Error, Result};
use crate::math::{Rgb, Vec3};
use crate::real::Real;

/// Distant sun. `direction` is the direction light travels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SunLight<T> {
    pub direction: Vec3<T>,
    /// Irradiance on a surface facing the sun.
    pub spectrum: Rgb<T>,
    /// Half-angle of the sun disk, radians; 0 is an ideal directional light.
    pub angular_radius: T,
}

impl<T: Real> SunLight<T> {
    pub fn new(direction: Vec3<T>, spectrum: Rgb<T>) -> Self {
        Self {
            direction: direction.normalized(),
            spectrum,
            angular_radius: T::zero(),
        }
    }

    /// Sun at `elevation` above the horizon and `azimuth` about +y, radians.
    pub fn from_angles(elevation: T, azimuth: T, spectrum: Rgb<T>) -> Self {
        let (se, ce) = elevation.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Self::new(-Vec3::new(ce * ca, se, ce * sa), spectrum)
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::of(1e-9).max(T::epsilon() * T::of(8.0));
        if !((T::one() - self.direction.length()).abs() < tol) {
            return Err(Error::Config("sun direction must be unit length".into()));
        }
        if !(self.spectrum.min_component() >= T::zero()) || !self.spectrum.is_finite() {
            return Err(Error::Config("sun spectrum must be finite and non-negative".into()));
        }
        if !(self.angular_radius >= T::zero() && self.angular_radius < T::FRAC_PI_2()) {
            return Err(Error::Config("sun angular radius outside [0, pi/2)".into()));
        }
        Ok(())
    }

    /// Unit vector from a surface toward the sun center.
    pub fn to_sun(&self) -> Vec3<T> {
        -self.direction
    }
}

/// Everything that emits: the sun plus uniform sky radiance seen by rays that
/// leave the scene.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lighting<T> {
    pub sun: SunLight<T>,
    pub sky: Rgb<T>,
}

impl<T: Real> Lighting<T> {
    pub fn validate(&self) -> Result<()> {
        self.sun.validate()?;
        if !(self.sky.min_component() >= T::zero()) || !self.sky.is_finite() {
            return Err(Error::Config("sky radiance must be finite and non-negative".into()));
        }
        Ok(())
    }
}
