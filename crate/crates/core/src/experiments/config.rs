//! Dataset generation settings, stored as TOML and embedded verbatim in every
//! manifest so a dataset can be regenerated from its manifest alone.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assets::AssetStyle;
use crate::error::{Error, Result};
use crate::math::{Rgb, Vec3};
use crate::real::Real;
use crate::render::{Lighting, Medium, RenderConfig, ShadingMode, SunLight};
use crate::scene::SceneFile;

/// One rendering accuracy level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fidelity {
    Lambertian,
    CookTorrance,
    /// Path tracing with this many samples per pixel.
    PathTraced(u32),
}

impl Fidelity {
    /// Lambertian, Cook-Torrance and path tracing at 10 to 130 samples per
    /// pixel in steps of 30.
    pub fn standard_set() -> Vec<Fidelity> {
        let mut v = vec![Fidelity::Lambertian, Fidelity::CookTorrance];
        v.extend((10..=130).step_by(30).map(Fidelity::PathTraced));
        v
    }

    pub fn render_config(self, seed: u64, max_bounces: u32) -> RenderConfig {
        let (mode, spp) = match self {
            Fidelity::Lambertian => (ShadingMode::Lambertian, 1),
            Fidelity::CookTorrance => (ShadingMode::CookTorrance, 1),
            Fidelity::PathTraced(spp) => (ShadingMode::PathTracing, spp),
        };
        RenderConfig {
            mode,
            spp,
            max_bounces,
            seed,
        }
    }
}

impl fmt::Display for Fidelity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fidelity::Lambertian => f.write_str("lambertian"),
            Fidelity::CookTorrance => f.write_str("cook-torrance"),
            Fidelity::PathTraced(spp) => write!(f, "mcpt-{spp}"),
        }
    }
}

impl FromStr for Fidelity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambertian" => Ok(Fidelity::Lambertian),
            "cook-torrance" => Ok(Fidelity::CookTorrance),
            _ => s
                .strip_prefix("mcpt-")
                .and_then(|n| n.parse::<u32>().ok())
                .filter(|&n| n > 0)
                .map(Fidelity::PathTraced)
                .ok_or_else(|| {
                    Error::Config(format!(
                        "unknown fidelity `{s}` (expected lambertian, cook-torrance or mcpt-<spp>)"
                    ))
                }),
        }
    }
}

/// Parses a comma-separated fidelity list such as `lambertian,mcpt-40`.
pub fn parse_fidelity_list(s: &str) -> Result<Vec<Fidelity>> {
    let list: Vec<Fidelity> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if list.is_empty() {
        return Err(Error::Config("empty fidelity list".into()));
    }
    Ok(list)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CameraSection {
    pub width: usize,
    pub height: usize,
    /// Eye height above the road, meters.
    pub eye_height: f64,
    /// Positive looks up, degrees.
    pub pitch_deg: f64,
    pub vertical_fov_deg: f64,
    /// Unobstructed distance the camera policy requires ahead, meters.
    pub clearance: f64,
}

impl Default for CameraSection {
    fn default() -> Self {
        Self {
            width: 128,
            height: 128,
            eye_height: 1.5,
            pitch_deg: 0.0,
            vertical_fov_deg: 60.0,
            clearance: 6.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LightingSection {
    pub sun_elevation_deg: f64,
    pub sun_azimuth_deg: f64,
    pub sun_spectrum: [f64; 3],
    #[serde(default)]
    pub sun_angular_radius_deg: f64,
    pub sky: [f64; 3],
}

impl Default for LightingSection {
    fn default() -> Self {
        Self {
            sun_elevation_deg: 45.0,
            sun_azimuth_deg: 30.0,
            sun_spectrum: [3.0, 2.9, 2.7],
            sun_angular_radius_deg: 0.0,
            sky: [0.45, 0.6, 0.85],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MediumSection {
    pub enabled: bool,
    pub scattering: f64,
    pub absorption: f64,
    pub anisotropy: f64,
    /// Fog fills the space below this height, meters.
    pub ceiling: f64,
}

impl Default for MediumSection {
    fn default() -> Self {
        Self {
            enabled: false,
            scattering: 0.0,
            absorption: 0.0,
            anisotropy: 0.0,
            ceiling: 40.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StyleSection {
    pub tint: [f64; 3],
    pub texture_contrast: f64,
    pub ground_albedo: [f64; 3],
    pub road_albedo: [f64; 3],
}

impl Default for StyleSection {
    fn default() -> Self {
        let s = AssetStyle::<f64>::default();
        let arr = |c: Rgb<f64>| [c.r, c.g, c.b];
        Self {
            tint: arr(s.tint),
            texture_contrast: s.texture_contrast,
            ground_albedo: arr(s.ground_albedo),
            road_albedo: arr(s.road_albedo),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSection {
    pub n_scenes: u32,
    /// Scene `i` uses seed `base_seed + i`.
    pub base_seed: u64,
    pub fidelities: Vec<String>,
    pub max_bounces: u32,
}

impl Default for DatasetSection {
    fn default() -> Self {
        Self {
            n_scenes: 3,
            base_seed: 0,
            fidelities: Fidelity::standard_set().iter().map(|f| f.to_string()).collect(),
            max_bounces: 8,
        }
    }
}

/// Everything needed to generate a dataset.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationConfig {
    #[serde(default)]
    pub dataset: DatasetSection,
    #[serde(default)]
    pub scene: SceneFile,
    #[serde(default)]
    pub camera: CameraSection,
    #[serde(default)]
    pub lighting: LightingSection,
    #[serde(default)]
    pub medium: MediumSection,
    #[serde(default)]
    pub style: StyleSection,
}

fn rgb<T: Real>(c: [f64; 3]) -> Rgb<T> {
    Rgb::new(T::of(c[0]), T::of(c[1]), T::of(c[2]))
}

impl GenerationConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// The built-in stand-in for real imagery: different mark priors,
    /// warmer and higher-contrast materials, a lower sun and light fog.
    pub fn shifted_target() -> Self {
        let mut cfg = Self::default();
        let s = &mut cfg.scene;
        s.static_objects.intensity = 0.008;
        s.static_objects.weights.insert("building".into(), 0.7);
        s.static_objects.weights.insert("tree".into(), 0.3);
        s.static_objects.scale.insert("building".into(), [1.1, 1.6]);
        s.static_objects.scale.insert("tree".into(), [0.9, 1.5]);
        s.dynamic_objects.intensity = 0.016;
        s.dynamic_objects.weights.insert("pedestrian".into(), 0.5);
        s.dynamic_objects.weights.insert("vehicle".into(), 0.5);
        cfg.style = StyleSection {
            tint: [1.1, 0.95, 0.8],
            texture_contrast: 2.0,
            ground_albedo: [0.36, 0.32, 0.24],
            road_albedo: [0.22, 0.21, 0.2],
        };
        cfg.lighting = LightingSection {
            sun_elevation_deg: 28.0,
            sun_azimuth_deg: 120.0,
            sun_spectrum: [3.4, 2.9, 2.3],
            sun_angular_radius_deg: 0.0,
            sky: [0.6, 0.62, 0.66],
        };
        cfg.medium = MediumSection {
            enabled: true,
            scattering: 0.005,
            absorption: 0.002,
            anisotropy: 0.6,
            ceiling: 40.0,
        };
        cfg.dataset.base_seed = 1_000_000;
        cfg
    }

    pub fn fidelities(&self) -> Result<Vec<Fidelity>> {
        self.dataset.fidelities.iter().map(|s| s.parse()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.dataset.n_scenes == 0 {
            return Err(Error::Config("n_scenes must be at least 1".into()));
        }
        if self.dataset.max_bounces == 0 {
            return Err(Error::Config("max_bounces must be at least 1".into()));
        }
        if self.fidelities()?.is_empty() {
            return Err(Error::Config("at least one fidelity is required".into()));
        }
        let c = &self.camera;
        if !(c.eye_height.is_finite() && c.pitch_deg.abs() < 89.0 && c.clearance >= 0.0) {
            return Err(Error::Camera("eye height must be finite and |pitch| < 89 degrees".into()));
        }
        if c.width == 0 || c.height == 0 {
            return Err(Error::Camera("resolution must be positive".into()));
        }
        self.scene.to_config::<f64>()?;
        let st = self.style_of::<f64>();
        let colors_ok = [st.tint, st.ground_albedo, st.road_albedo]
            .iter()
            .all(|c| c.is_finite() && c.min_component() >= 0.0);
        if !colors_ok || !(st.texture_contrast >= 0.0 && st.texture_contrast.is_finite()) {
            return Err(Error::Config("style colors and contrast must be finite and non-negative".into()));
        }
        self.lighting_of::<f64>().validate()?;
        self.medium_of::<f64>().validate()
    }

    pub fn style_of<T: Real>(&self) -> AssetStyle<T> {
        AssetStyle {
            tint: rgb(self.style.tint),
            texture_contrast: T::of(self.style.texture_contrast),
            ground_albedo: rgb(self.style.ground_albedo),
            road_albedo: rgb(self.style.road_albedo),
        }
    }

    pub fn lighting_of<T: Real>(&self) -> Lighting<T> {
        let l = &self.lighting;
        let mut sun = SunLight::from_angles(
            T::of(l.sun_elevation_deg.to_radians()),
            T::of(l.sun_azimuth_deg.to_radians()),
            rgb(l.sun_spectrum),
        );
        sun.angular_radius = T::of(l.sun_angular_radius_deg.to_radians());
        Lighting { sun, sky: rgb(l.sky) }
    }

    pub fn medium_of<T: Real>(&self) -> Medium<T> {
        let m = &self.medium;
        Medium {
            scattering: T::of(m.scattering),
            absorption: T::of(m.absorption),
            anisotropy: T::of(m.anisotropy),
            enabled: m.enabled,
            ceiling: T::of(m.ceiling),
        }
    }

    /// Unit view direction for a camera heading along `heading` in the
    /// ground plane.
    pub fn view_direction<T: Real>(&self, heading: Vec3<T>) -> Vec3<T> {
        let (sp, cp) = T::of(self.camera.pitch_deg.to_radians()).sin_cos();
        Vec3::new(heading.x * cp, sp, heading.z * cp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fidelity_names_round_trip() {
        let set = Fidelity::standard_set();
        assert_eq!(set.len(), 7);
        let names: Vec<String> = set.iter().map(|f| f.to_string()).collect();
        assert_eq!(
            names,
            ["lambertian", "cook-torrance", "mcpt-10", "mcpt-40", "mcpt-70", "mcpt-100", "mcpt-130"]
        );
        for f in set {
            assert_eq!(f.to_string().parse::<Fidelity>().unwrap(), f);
        }
        assert!("mcpt-0".parse::<Fidelity>().is_err());
        assert!(parse_fidelity_list("lambertian, mcpt-40").unwrap().len() == 2);
    }

    #[test]
    fn configs_round_trip_through_toml() {
        for cfg in [GenerationConfig::default(), GenerationConfig::shifted_target()] {
            cfg.validate().unwrap();
            assert_eq!(GenerationConfig::from_toml(&cfg.to_toml().unwrap()).unwrap(), cfg);
        }
        assert!(GenerationConfig::from_toml("[camera]\nbogus = 1\n").is_err());
    }

    #[test]
    fn missing_keys_take_their_defaults() {
        let cfg = GenerationConfig::from_toml("[camera]\nwidth = 16\n").unwrap();
        assert_eq!(cfg.camera.width, 16);
        assert_eq!(cfg.camera.height, CameraSection::default().height);
        assert_eq!(cfg.dataset, DatasetSection::default());
    }
}
