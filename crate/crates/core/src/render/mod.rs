//! Three fidelity tiers over the same geometry (Lambertian, Cook-Torrance,
//! path tracing with a configurable number of samples per pixel) and the
//! pixel-aligned groundtruth pass.

mod camera;
mod io;
mod light;
mod medium;
mod output;
mod path;
mod sampling;
mod shading;
mod world;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rayon::prelude::*;

pub use camera::Camera;
pub use io::{
    read_label_png, read_pfm, read_rgb_png, write_label_png, write_pfm, write_rgb_png, FrameMetadata, Pfm,
};
pub use light::{Lighting, SunLight};
pub use medium::Medium;
pub use output::{tonemap, Framebuffer, GroundtruthBundle};
pub use path::{offset_origin, trace_path, ROULETTE_START};
pub use sampling::{around, cosine_hemisphere, uniform_cone};
pub use shading::{beckmann_d, fresnel_schlick, shade_cook_torrance, shade_lambertian, smith_g1, DIELECTRIC_F0};
pub use world::{Hit, Ray, World};

use crate::error::{Error, Result};
use crate::labels::SemanticClass;
use crate::math::{Rgb, Vec3};
use crate::real::Real;
use crate::rng::pixel_stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShadingMode {
    Lambertian,
    CookTorrance,
    PathTracing,
}

impl ShadingMode {
    pub fn name(self) -> &'static str {
        match self {
            ShadingMode::Lambertian => "lambertian",
            ShadingMode::CookTorrance => "cook-torrance",
            ShadingMode::PathTracing => "path-tracing",
        }
    }
}

impl fmt::Display for ShadingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShadingMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambertian" => Ok(ShadingMode::Lambertian),
            "cook-torrance" => Ok(ShadingMode::CookTorrance),
            "path-tracing" => Ok(ShadingMode::PathTracing),
            _ => Err(Error::Config(format!("unknown shading mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderConfig {
    pub mode: ShadingMode,
    /// Samples per pixel; path tracing only.
    pub spp: u32,
    pub max_bounces: u32,
    pub seed: u64,
}

impl RenderConfig {
    pub fn new(mode: ShadingMode, spp: u32, seed: u64) -> Self {
        Self {
            mode,
            spp,
            max_bounces: 8,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.spp == 0 {
            return Err(Error::Config("spp must be at least 1".into()));
        }
        if self.max_bounces == 0 {
            return Err(Error::Config("max_bounces must be at least 1".into()));
        }
        Ok(())
    }
}

struct PixelOut<T> {
    color: Rgb<T>,
    label: SemanticClass,
    depth: T,
    normal: Vec3<T>,
}

/// Renders one frame and its groundtruth. Rows are processed in parallel on
/// the current rayon pool; each pixel draws from its own stream keyed by
/// `(config.seed, pixel index)`, so the output does not depend on the number
/// of threads.
pub fn render<T: Real>(
    world: &World<T>,
    camera: &Camera<T>,
    lighting: &Lighting<T>,
    medium: &Medium<T>,
    config: &RenderConfig,
) -> Result<(Framebuffer<T>, GroundtruthBundle<T>)> {
    camera.validate()?;
    lighting.validate()?;
    medium.validate()?;
    config.validate()?;

    let (w, h) = (camera.width, camera.height);
    let rows: Vec<Vec<PixelOut<T>>> = (0..h)
        .into_par_iter()
        .map(|y| (0..w).map(|x| render_pixel(world, camera, lighting, medium, config, x, y)).collect())
        .collect();

    let mut linear = Vec::with_capacity(w * h);
    let mut labels = Vec::with_capacity(w * h);
    let mut depth = Vec::with_capacity(w * h);
    let mut normals = Vec::with_capacity(w * h);
    for p in rows.into_iter().flatten() {
        linear.push(p.color);
        labels.push(p.label);
        depth.push(p.depth);
        normals.push(p.normal);
    }
    Ok((
        Framebuffer::from_linear(w, h, linear),
        GroundtruthBundle {
            width: w,
            height: h,
            labels,
            depth,
            normals,
        },
    ))
}

fn render_pixel<T: Real>(
    world: &World<T>,
    camera: &Camera<T>,
    lighting: &Lighting<T>,
    medium: &Medium<T>,
    config: &RenderConfig,
    x: usize,
    y: usize,
) -> PixelOut<T> {
    let center = camera.center_ray(x, y);
    let hit = world.intersect(&center);
    let (label, depth, normal) = match &hit {
        Some(h) => (h.class, h.t, h.normal),
        None => (SemanticClass::Sky, T::infinity(), Vec3::zero()),
    };
    let color = match config.mode {
        ShadingMode::Lambertian => match &hit {
            Some(h) => shade_lambertian(h, &lighting.sun),
            None => lighting.sky,
        },
        ShadingMode::CookTorrance => match &hit {
            Some(h) => shade_cook_torrance(h, &lighting.sun, -center.dir),
            None => lighting.sky,
        },
        ShadingMode::PathTracing => {
            let mut rng = pixel_stream(config.seed, (y * camera.width + x) as u64);
            let n = config.spp as usize;
            // N-rooks: stratified along both axes for any sample count.
            let mut rows: Vec<usize> = (0..n).collect();
            rows.shuffle(&mut rng);
            let nf = T::from_usize(n).unwrap();
            let (fx, fy) = (T::from_usize(x).unwrap(), T::from_usize(y).unwrap());
            let mut sum = Rgb::black();
            for (s, &row) in rows.iter().enumerate() {
                let jx = (T::from_usize(s).unwrap() + T::sample_unit(&mut rng)) / nf;
                let jy = (T::from_usize(row).unwrap() + T::sample_unit(&mut rng)) / nf;
                let ray = camera.ray(fx + jx, fy + jy);
                sum += trace_path(world, medium, lighting, ray, config.max_bounces, &mut rng);
            }
            sum / nf
        }
    };
    PixelOut {
        color,
        label,
        depth,
        normal,
    }
}
