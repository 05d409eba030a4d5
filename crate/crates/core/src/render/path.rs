//! Monte-Carlo path tracing with next-event estimation toward the sun.

use log::warn;

use crate::math::{Rgb, Vec3};
use crate::real::Real;
use crate::rng::StreamRng;

use super::light::Lighting;
use super::medium::Medium;
use super::sampling::{cosine_hemisphere, uniform_cone};
use super::world::{Ray, World};

/// Russian roulette is applied from this scattering event on.
pub const ROULETTE_START: u32 = 3;

/// Origin for a ray leaving `p` on the side of `n`.
pub fn offset_origin<T: Real>(p: Vec3<T>, n: Vec3<T>) -> Vec3<T> {
    let scale = T::one() + p.x.abs().max(p.y.abs()).max(p.z.abs());
    p + n * (T::RAY_EPSILON * scale)
}

fn add_finite<T: Real>(acc: &mut Rgb<T>, c: Rgb<T>) {
    if c.is_finite() {
        *acc += c;
    } else {
        warn!("rejected non-finite path contribution {c:?}");
    }
}

fn sun_direction<T: Real>(lighting: &Lighting<T>, rng: &mut StreamRng) -> Vec3<T> {
    let sun = &lighting.sun;
    if sun.angular_radius > T::zero() {
        let (u1, u2) = (T::sample_unit(rng), T::sample_unit(rng));
        uniform_cone(sun.to_sun(), sun.angular_radius, u1, u2)
    } else {
        sun.to_sun()
    }
}

/// One radiance estimate along `ray`. `max_bounces` caps the number of
/// scattering events (surface or medium); light arriving after the last one
/// is not traced.
pub fn trace_path<T: Real>(
    world: &World<T>,
    medium: &Medium<T>,
    lighting: &Lighting<T>,
    mut ray: Ray<T>,
    max_bounces: u32,
    rng: &mut StreamRng,
) -> Rgb<T> {
    let mut radiance = Rgb::black();
    let mut beta = Rgb::splat(T::one());
    let mut events = 0u32;
    let sun_on = !lighting.sun.spectrum.is_black();

    loop {
        let hit = world.intersect(&ray);
        let t_hit = hit.as_ref().map_or(T::infinity(), |h| h.t);

        if let Some((a, b)) = medium.interval(&ray, t_hit) {
            if medium.scattering > T::zero() {
                let sigma_t = medium.extinction();
                let u = T::sample_unit(rng);
                let d = a - (T::one() - u).ln() / sigma_t;
                if d < b {
                    events += 1;
                    let p = ray.at(d);
                    let single_albedo = medium.scattering / sigma_t;
                    beta = beta * single_albedo;
                    if sun_on {
                        let l = sun_direction(lighting, rng);
                        let shadow = Ray::new(p, l);
                        if !world.occluded(&shadow, T::infinity()) {
                            let tr = medium.transmittance(&shadow, T::infinity());
                            let f = medium.phase(ray.dir.dot(l));
                            add_finite(&mut radiance, beta * lighting.sun.spectrum * (f * tr));
                        }
                    }
                    if events >= max_bounces {
                        break;
                    }
                    if events >= ROULETTE_START {
                        let q = single_albedo.min(T::one());
                        if q <= T::zero() || T::sample_unit(rng) >= q {
                            break;
                        }
                        beta = beta / q;
                    }
                    let (u1, u2) = (T::sample_unit(rng), T::sample_unit(rng));
                    ray = Ray::new(p, medium.sample_phase(ray.dir, u1, u2));
                    continue;
                }
                // Passing through: the free-flight probability cancels the
                // transmittance.
            } else {
                beta = beta * (-medium.absorption * (b - a)).exp();
            }
        }

        let Some(hit) = hit else {
            add_finite(&mut radiance, beta * lighting.sky);
            break;
        };
        events += 1;
        let albedo = hit.material.albedo_at(hit.uv);
        let origin = offset_origin(hit.point, hit.normal);

        if sun_on {
            let l = sun_direction(lighting, rng);
            let cos = hit.normal.dot(l);
            if cos > T::zero() {
                let shadow = Ray::new(origin, l);
                if !world.occluded(&shadow, T::infinity()) {
                    let tr = medium.transmittance(&shadow, T::infinity());
                    let c = beta * albedo * lighting.sun.spectrum * (cos * tr / T::PI());
                    add_finite(&mut radiance, c);
                }
            }
        }
        if events >= max_bounces {
            break;
        }
        beta *= albedo;
        if events >= ROULETTE_START {
            let q = albedo.max_component().min(T::one());
            if q <= T::zero() || T::sample_unit(rng) >= q {
                break;
            }
            beta = beta / q;
        }
        if !beta.is_finite() {
            warn!("path throughput became non-finite; terminating");
            break;
        }
        let (u1, u2) = (T::sample_unit(rng), T::sample_unit(rng));
        ray = Ray::new(origin, cosine_hemisphere(hit.normal, u1, u2));
    }
    radiance
}
