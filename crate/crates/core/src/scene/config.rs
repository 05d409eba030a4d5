//! TOML scene configuration.
//!
//! ```toml
//! [region]
//! min = [0.0, 0.0]
//! max = [120.0, 120.0]
//!
//! [roads]
//! cell_size = 2.0
//! spacing = 40.0
//! width = 10.0
//!
//! [assets]            # procedural assets available per category
//! building = 6
//! tree = 4
//!
//! [static]
//! intensity = 0.004   # objects per m²
//! avoid_roads = true
//! radius = { building = 14.0, tree = 4.0 }
//! weights = { building = 0.6, tree = 0.4 }
//! scale = { building = [0.8, 1.3], tree = [0.7, 1.3] }
//! ```
//!
//! `[dynamic]` takes the same keys plus `path_fraction`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::Vec2;
use crate::real::Real;

use super::process::{MarkPriors, PointProcessConfig};
use super::roads::RoadGridConfig;
use super::sampler::{ProcessSpec, SceneConfig};
use super::{Category, Region};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSection {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoadSection {
    pub cell_size: f64,
    pub spacing: f64,
    pub width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessSection {
    pub intensity: f64,
    #[serde(default = "default_rounds")]
    pub max_rejection_rounds: u32,
    #[serde(default)]
    pub avoid_roads: Option<bool>,
    #[serde(default)]
    pub path_fraction: Option<f64>,
    pub radius: BTreeMap<String, f64>,
    pub weights: BTreeMap<String, f64>,
    pub scale: BTreeMap<String, [f64; 2]>,
    #[serde(default)]
    pub orientation: Option<[f64; 2]>,
}

fn default_rounds() -> u32 {
    30
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub region: RegionSection,
    pub roads: RoadSection,
    pub assets: BTreeMap<String, u32>,
    #[serde(rename = "static")]
    pub static_objects: ProcessSection,
    #[serde(rename = "dynamic")]
    pub dynamic_objects: ProcessSection,
}

fn per_category<V: Copy>(map: &BTreeMap<String, V>, default: V) -> Result<[V; 4]> {
    let mut out = [default; 4];
    for (k, v) in map {
        let c: Category = k.parse()?;
        out[c.index()] = *v;
    }
    Ok(out)
}

impl SceneFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn asset_counts(&self) -> Result<[u32; 4]> {
        per_category(&self.assets, 0)
    }

    pub fn to_config<T: Real>(&self) -> Result<SceneConfig<T>> {
        let v2 = |p: [f64; 2]| Vec2::new(T::of(p[0]), T::of(p[1]));
        let counts = self.asset_counts()?;
        let spec = |s: &ProcessSection| -> Result<ProcessSpec<T>> {
            let radius = per_category(&s.radius, 0.0)?;
            let weights = per_category(&s.weights, 0.0)?;
            let scale = per_category(&s.scale, [1.0, 1.0])?;
            let orient = s.orientation.unwrap_or([0.0, std::f64::consts::TAU]);
            Ok(ProcessSpec {
                process: PointProcessConfig {
                    intensity: T::of(s.intensity),
                    hard_core_radius: radius.map(T::of),
                    max_rejection_rounds: s.max_rejection_rounds,
                },
                priors: MarkPriors {
                    category_weights: weights.map(T::of),
                    scale_range: scale.map(|[a, b]| (T::of(a), T::of(b))),
                    orientation_range: (T::of(orient[0]), T::of(orient[1])),
                    asset_counts: counts,
                },
            })
        };
        let cfg = SceneConfig {
            region: Region::new(v2(self.region.min), v2(self.region.max))?,
            roads: RoadGridConfig {
                cell_size: T::of(self.roads.cell_size),
                spacing: T::of(self.roads.spacing),
                width: T::of(self.roads.width),
            },
            static_objects: spec(&self.static_objects)?,
            dynamic_objects: spec(&self.dynamic_objects)?,
            static_avoid_roads: self.static_objects.avoid_roads.unwrap_or(true),
            path_fraction: T::of(self.dynamic_objects.path_fraction.unwrap_or(0.0)),
        };
        cfg.validate()?;
        if self.static_objects.path_fraction.is_some() {
            return Err(Error::Config("path_fraction only applies to [dynamic]".into()));
        }
        Ok(cfg)
    }
}

impl Default for SceneFile {
    /// A 120 m × 120 m block with a 40 m road grid. Values are chosen for
    /// visual plausibility, not taken from any measured city.
    fn default() -> Self {
        let map = |pairs: &[(&str, f64)]| pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let ranges = |pairs: &[(&str, [f64; 2])]| pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        SceneFile {
            region: RegionSection {
                min: [0.0, 0.0],
                max: [120.0, 120.0],
            },
            roads: RoadSection {
                cell_size: 2.0,
                spacing: 40.0,
                width: 12.0,
            },
            assets: [("building", 6), ("pedestrian", 3), ("tree", 4), ("vehicle", 5)]
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            static_objects: ProcessSection {
                intensity: 0.006,
                max_rejection_rounds: 30,
                avoid_roads: Some(true),
                path_fraction: None,
                radius: map(&[("building", 11.0), ("tree", 3.0)]),
                weights: map(&[("building", 0.55), ("tree", 0.45)]),
                scale: ranges(&[("building", [0.8, 1.3]), ("tree", [0.7, 1.3])]),
                orientation: None,
            },
            dynamic_objects: ProcessSection {
                intensity: 0.01,
                max_rejection_rounds: 30,
                avoid_roads: None,
                path_fraction: Some(0.0),
                radius: map(&[("pedestrian", 1.0), ("vehicle", 5.0)]),
                weights: map(&[("pedestrian", 0.4), ("vehicle", 0.6)]),
                scale: ranges(&[("pedestrian", [0.9, 1.1]), ("vehicle", [0.9, 1.1])]),
                orientation: None,
            },
        }
    }
}
