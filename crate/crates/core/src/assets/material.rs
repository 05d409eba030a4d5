use crate::error::{Error, Result};
use crate::math::{Rgb, Vec2};
use crate::real::Real;
use crate::rng::mix64;

/// Procedural grayscale modulation of the diffuse albedo, evaluated at shade
/// time from surface coordinates in meters. Values lie in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Texture<T> {
    Checker { size: T, dark: T },
    Stripes { period: T, duty: T, dark: T, along_v: bool },
    Noise { scale: T, amplitude: T, seed: u64 },
}

impl<T: Real> Texture<T> {
    pub fn factor(&self, uv: Vec2<T>) -> T {
        match *self {
            Texture::Checker { size, dark } => {
                let i = (uv.x / size).floor().to_i64().unwrap_or(0);
                let j = (uv.y / size).floor().to_i64().unwrap_or(0);
                if (i + j).rem_euclid(2) == 0 {
                    T::one()
                } else {
                    dark
                }
            }
            Texture::Stripes {
                period,
                duty,
                dark,
                along_v,
            } => {
                let c = if along_v { uv.y } else { uv.x };
                let f = (c / period) - (c / period).floor();
                if f < duty {
                    dark
                } else {
                    T::one()
                }
            }
            Texture::Noise { scale, amplitude, seed } => {
                T::one() - amplitude * value_noise(uv.x / scale, uv.y / scale, seed)
            }
        }
    }
}

fn lattice<T: Real>(i: i64, j: i64, seed: u64) -> T {
    let h = mix64(seed ^ mix64((i as u64) ^ mix64(j as u64)));
    T::of((h >> 11) as f64 / (1u64 << 53) as f64)
}

/// Smoothly interpolated lattice noise in `[0, 1)`.
pub fn value_noise<T: Real>(x: T, y: T, seed: u64) -> T {
    let (fx, fy) = (x.floor(), y.floor());
    let (i, j) = (fx.to_i64().unwrap_or(0), fy.to_i64().unwrap_or(0));
    let (tx, ty) = (x - fx, y - fy);
    let smooth = |t: T| t * t * (T::of(3.0) - T::of(2.0) * t);
    let (sx, sy) = (smooth(tx), smooth(ty));
    let lerp = |a: T, b: T, t: T| a + (b - a) * t;
    let top = lerp(lattice(i, j, seed), lattice(i + 1, j, seed), sx);
    let bottom = lerp(lattice(i, j + 1, seed), lattice(i + 1, j + 1, seed), sx);
    lerp(top, bottom, sy)
}

/// Binary texel map selecting where the specular lobe is active. Tiles the
/// surface with texels of `texel_size` meters.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryMask<T> {
    width: usize,
    height: usize,
    texel_size: T,
    bits: Vec<bool>,
}

impl<T: Real> BinaryMask<T> {
    pub fn new(width: usize, height: usize, texel_size: T, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 || bits.len() != width * height || !(texel_size > T::zero()) {
            return Err(Error::Config(format!(
                "binary mask {width}x{height} with {} bits and texel size {texel_size}",
                bits.len()
            )));
        }
        Ok(Self {
            width,
            height,
            texel_size,
            bits,
        })
    }

    pub fn uniform(value: bool) -> Self {
        Self {
            width: 1,
            height: 1,
            texel_size: T::one(),
            bits: vec![value],
        }
    }

    pub fn at(&self, uv: Vec2<T>) -> bool {
        let i = (uv.x / self.texel_size).floor().to_i64().unwrap_or(0);
        let j = (uv.y / self.texel_size).floor().to_i64().unwrap_or(0);
        let c = i.rem_euclid(self.width as i64) as usize;
        let r = j.rem_euclid(self.height as i64) as usize;
        self.bits[r * self.width + c]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Material<T> {
    pub diffuse_albedo: Rgb<T>,
    pub specular_coefficient: T,
    pub roughness: T,
    pub specular_mask: Option<BinaryMask<T>>,
    pub texture: Option<Texture<T>>,
}

impl<T: Real> Material<T> {
    pub fn diffuse(albedo: Rgb<T>) -> Self {
        Self {
            diffuse_albedo: albedo,
            specular_coefficient: T::zero(),
            roughness: T::one(),
            specular_mask: None,
            texture: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.diffuse_albedo;
        if !(a.min_component() >= T::zero() && a.max_component() <= T::one()) {
            return Err(Error::Config(format!("albedo {a:?} outside [0, 1]")));
        }
        if !(self.specular_coefficient >= T::zero() && self.specular_coefficient <= T::one()) {
            return Err(Error::Config("specular coefficient outside [0, 1]".into()));
        }
        if !(self.roughness > T::zero() && self.roughness <= T::one()) {
            return Err(Error::Config("roughness outside (0, 1]".into()));
        }
        Ok(())
    }

    pub fn albedo_at(&self, uv: Vec2<T>) -> Rgb<T> {
        match &self.texture {
            Some(t) => self.diffuse_albedo * t.factor(uv),
            None => self.diffuse_albedo,
        }
    }

    /// Specular weight: coefficient times the binary mask value.
    pub fn specular_at(&self, uv: Vec2<T>) -> T {
        match &self.specular_mask {
            Some(m) if !m.at(uv) => T::zero(),
            _ => self.specular_coefficient,
        }
    }
}
