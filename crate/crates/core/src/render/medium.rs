//! Homogeneous fog filling the half-space below a ceiling height.

use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::real::Real;

use super::sampling::around;
use super::world::Ray;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Medium<T> {
    /// σs, 1/m.
    pub scattering: T,
    /// σa, 1/m.
    pub absorption: T,
    /// Henyey-Greenstein g.
    pub anisotropy: T,
    pub enabled: bool,
    /// Fog occupies `y <= ceiling`, meters.
    pub ceiling: T,
}

impl<T: Real> Medium<T> {
    pub fn disabled() -> Self {
        Self {
            scattering: T::zero(),
            absorption: T::zero(),
            anisotropy: T::zero(),
            enabled: false,
            ceiling: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scattering >= T::zero() && self.absorption >= T::zero())
            || !self.scattering.is_finite()
            || !self.absorption.is_finite()
        {
            return Err(Error::Config("medium coefficients must be finite and >= 0".into()));
        }
        if !(self.anisotropy > -T::one() && self.anisotropy < T::one()) {
            return Err(Error::Config(format!("anisotropy {} outside (-1, 1)", self.anisotropy)));
        }
        if !self.ceiling.is_finite() {
            return Err(Error::Config("medium ceiling must be finite".into()));
        }
        Ok(())
    }

    pub fn extinction(&self) -> T {
        self.scattering + self.absorption
    }

    pub fn is_active(&self) -> bool {
        self.enabled && self.extinction() > T::zero()
    }

    /// Portion `[a, b)` of `[0, t_max)` along the ray that lies in the fog.
    pub fn interval(&self, ray: &Ray<T>, t_max: T) -> Option<(T, T)> {
        if !self.is_active() {
            return None;
        }
        let (oy, dy) = (ray.origin.y, ray.dir.y);
        let (a, b) = if dy == T::zero() {
            if oy <= self.ceiling {
                (T::zero(), t_max)
            } else {
                return None;
            }
        } else {
            let t_c = (self.ceiling - oy) / dy;
            if dy > T::zero() {
                (T::zero(), t_c.min(t_max))
            } else {
                (t_c.max(T::zero()), t_max)
            }
        };
        (b > a).then_some((a, b))
    }

    /// Beer-Lambert transmittance over `[0, t_max)`; 1 when inactive.
    pub fn transmittance(&self, ray: &Ray<T>, t_max: T) -> T {
        match self.interval(ray, t_max) {
            Some((a, b)) => {
                let len = b - a;
                if len.is_infinite() {
                    T::zero()
                } else {
                    (-self.extinction() * len).exp()
                }
            }
            None => T::one(),
        }
    }

    /// Phase function density per steradian; `cos_theta` is between the
    /// incoming and outgoing propagation directions.
    pub fn phase(&self, cos_theta: T) -> T {
        let g = self.anisotropy;
        let denom = T::one() + g * g - T::of(2.0) * g * cos_theta;
        (T::one() - g * g) / (T::of(4.0) * T::PI() * denom * denom.sqrt())
    }

    /// Samples an outgoing direction proportional to the phase function.
    pub fn sample_phase(&self, incoming: Vec3<T>, u1: T, u2: T) -> Vec3<T> {
        let g = self.anisotropy;
        let cos_t = if g.abs() < T::of(1e-3) {
            T::one() - T::of(2.0) * u1
        } else {
            let s = (T::one() - g * g) / (T::one() - g + T::of(2.0) * g * u1);
            (T::one() + g * g - s * s) / (T::of(2.0) * g)
        };
        around(incoming, cos_t.max(-T::one()).min(T::one()), u2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fog(g: f64) -> Medium<f64> {
        Medium {
            scattering: 0.1,
            absorption: 0.05,
            anisotropy: g,
            enabled: true,
            ceiling: 10.0,
        }
    }

    #[test]
    fn phase_integrates_to_one() {
        // Midpoint rule over cos θ, times 2π.
        for g in [-0.7, 0.0, 0.3, 0.85] {
            let m = fog(g);
            let n = 200_000;
            let sum: f64 = (0..n).map(|i| m.phase(-1.0 + 2.0 * (i as f64 + 0.5) / n as f64)).sum();
            let integral = sum * 2.0 / n as f64 * std::f64::consts::TAU;
            assert!((integral - 1.0).abs() < 1e-6, "g={g}: {integral}");
        }
    }

    #[test]
    fn sampled_mean_cosine_is_g() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let d = Vec3::new(0.0, 0.0, 1.0);
        for g in [-0.5, 0.3, 0.8] {
            let m = fog(g);
            let n = 200_000;
            let mean: f64 = (0..n).map(|_| m.sample_phase(d, rng.random(), rng.random()).z).sum::<f64>() / n as f64;
            assert!((mean - g).abs() < 0.01, "g={g}: {mean}");
        }
    }

    #[test]
    fn interval_clips_at_the_ceiling() {
        let m = fog(0.0);
        let up = Ray::new(Vec3::new(0.0, 2.0, 0.0), Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(m.interval(&up, f64::INFINITY), Some((0.0, 8.0)));
        let down = Ray::new(Vec3::new(0.0, 20.0, 0.0), Vec3::new(0.0, -1.0, 0.0));
        assert_eq!(m.interval(&down, 15.0), Some((10.0, 15.0)));
        assert_eq!(m.interval(&down, 5.0), None);
        assert!((m.transmittance(&up, 4.0) - (-0.15f64 * 4.0).exp()).abs() < 1e-15);
        assert_eq!(Medium::<f64>::disabled().transmittance(&up, 100.0), 1.0);
    }
}
