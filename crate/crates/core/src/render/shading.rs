//! Local shading models used by the deterministic fidelity tiers.

use crate::math::{Rgb, Vec3};
use crate::real::Real;

use super::light::SunLight;
use super::world::Hit;

/// Normal-incidence reflectance of dielectrics.
pub const DIELECTRIC_F0: f64 = 0.04;

/// `(albedo / π) · E · max(0, n·l)`. No shadowing, no indirect light.
pub fn shade_lambertian<T: Real>(hit: &Hit<'_, T>, sun: &SunLight<T>) -> Rgb<T> {
    let cos = hit.normal.dot(sun.to_sun()).max(T::zero());
    hit.material.albedo_at(hit.uv) * sun.spectrum * (cos / T::PI())
}

/// Lambertian term plus `k_s · mask ·` Cook-Torrance specular with Beckmann
/// distribution, Smith shadowing and Schlick Fresnel. `view` points from the
/// surface toward the eye.
pub fn shade_cook_torrance<T: Real>(hit: &Hit<'_, T>, sun: &SunLight<T>, view: Vec3<T>) -> Rgb<T> {
    let diffuse = shade_lambertian(hit, sun);
    let ks = hit.material.specular_at(hit.uv);
    if ks == T::zero() {
        return diffuse;
    }
    let n = hit.normal;
    let l = sun.to_sun();
    let n_l = n.dot(l);
    let n_v = n.dot(view);
    if n_l <= T::zero() || n_v <= T::zero() {
        return diffuse;
    }
    let h = (l + view).normalized();
    let alpha = hit.material.roughness;
    let d = beckmann_d(n.dot(h), alpha);
    let g = smith_g1(n_v, alpha) * smith_g1(n_l, alpha);
    let f = fresnel_schlick(T::of(DIELECTRIC_F0), view.dot(h).max(T::zero()));
    let spec = ks * d * g * f / (T::of(4.0) * n_l * n_v);
    diffuse + sun.spectrum * (spec * n_l)
}

/// `F0 + (1 − F0)(1 − cos θ)^5`.
pub fn fresnel_schlick<T: Real>(f0: T, cos_theta: T) -> T {
    let m = T::one() - cos_theta;
    f0 + (T::one() - f0) * m.powi(5)
}

/// Beckmann microfacet distribution for `cos θh = n·h`.
pub fn beckmann_d<T: Real>(cos_h: T, alpha: T) -> T {
    if cos_h <= T::zero() {
        return T::zero();
    }
    let c2 = cos_h * cos_h;
    let tan2 = (T::one() - c2) / c2;
    let a2 = alpha * alpha;
    (-tan2 / a2).exp() / (T::PI() * a2 * c2 * c2)
}

/// Smith masking for the Beckmann distribution (Walter et al. rational fit).
pub fn smith_g1<T: Real>(cos: T, alpha: T) -> T {
    if cos <= T::zero() {
        return T::zero();
    }
    let tan = (T::one() - cos * cos).max(T::zero()).sqrt() / cos;
    if tan == T::zero() {
        return T::one();
    }
    let a = T::one() / (alpha * tan);
    if a >= T::of(1.6) {
        return T::one();
    }
    let g = (T::of(3.535) * a + T::of(2.181) * a * a) / (T::one() + T::of(2.276) * a + T::of(2.577) * a * a);
    g.min(T::one())
}
