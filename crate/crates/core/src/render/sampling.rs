//! Direction sampling on the unit sphere.

use crate::math::Vec3;
use crate::real::Real;

/// Cosine-weighted direction about unit `n`; pdf `cos θ / π`.
pub fn cosine_hemisphere<T: Real>(n: Vec3<T>, u1: T, u2: T) -> Vec3<T> {
    let r = u1.sqrt();
    let phi = T::TAU() * u2;
    let (s, c) = phi.sin_cos();
    let z = (T::one() - u1).max(T::zero()).sqrt();
    let (t, b) = n.orthonormal_basis();
    (t * (r * c) + b * (r * s) + n * z).normalized()
}

/// Uniform direction in the cone of half-angle `theta_max` about unit `axis`.
pub fn uniform_cone<T: Real>(axis: Vec3<T>, theta_max: T, u1: T, u2: T) -> Vec3<T> {
    let cos_max = theta_max.cos();
    let cos_t = T::one() - u1 * (T::one() - cos_max);
    let sin_t = (T::one() - cos_t * cos_t).max(T::zero()).sqrt();
    let (s, c) = (T::TAU() * u2).sin_cos();
    let (t, b) = axis.orthonormal_basis();
    (t * (sin_t * c) + b * (sin_t * s) + axis * cos_t).normalized()
}

/// Direction at polar angle `acos(cos_t)` from `axis` and azimuth `2π u`.
pub fn around<T: Real>(axis: Vec3<T>, cos_t: T, u: T) -> Vec3<T> {
    let sin_t = (T::one() - cos_t * cos_t).max(T::zero()).sqrt();
    let (s, c) = (T::TAU() * u).sin_cos();
    let (t, b) = axis.orthonormal_basis();
    (t * (sin_t * c) + b * (sin_t * s) + axis * cos_t).normalized()
}
