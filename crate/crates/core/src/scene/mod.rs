//! Street scene realizations drawn from two marked Poisson processes: static
//! objects on the ground and dynamic objects on the road network.

mod config;
mod process;
mod record;
mod roads;
mod sampler;

use std::fmt;
use std::str::FromStr;

pub use config::{ProcessSection, SceneFile};
pub use process::{
    apply_repulsion, sample_count, sample_locations, sample_marks, Domain, MarkPriors,
    PointProcessConfig, Repulsion,
};
pub use record::{parse_scene_record, write_scene_record, SCENE_RECORD_VERSION};
pub use roads::{Path, RoadNetwork, RoadGridConfig};
pub use sampler::{sample_scene, DropCounts, ProcessSpec, SceneConfig};

use crate::error::{Error, Result};
use crate::labels::SemanticClass;
use crate::math::Vec2;
use crate::real::Real;
use crate::rng::StreamRng;

/// Axis-aligned ground region, meters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region<T> {
    min: Vec2<T>,
    max: Vec2<T>,
}

impl<T: Real> Region<T> {
    pub fn new(min: Vec2<T>, max: Vec2<T>) -> Result<Self> {
        let ok = min.x.is_finite()
            && min.y.is_finite()
            && max.x.is_finite()
            && max.y.is_finite()
            && max.x > min.x
            && max.y > min.y;
        if !ok {
            return Err(Error::InvalidRegion(format!(
                "corners ({}, {}) .. ({}, {}) do not span a positive area",
                min.x, min.y, max.x, max.y
            )));
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> Vec2<T> {
        self.min
    }

    pub fn max(&self) -> Vec2<T> {
        self.max
    }

    pub fn width(&self) -> T {
        self.max.x - self.min.x
    }

    pub fn depth(&self) -> T {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> T {
        self.width() * self.depth()
    }

    pub fn center(&self) -> Vec2<T> {
        (self.min + self.max) * T::of(0.5)
    }

    /// Half-open containment, `[min, max)` on each axis.
    pub fn contains(&self, p: Vec2<T>) -> bool {
        p.x >= self.min.x && p.x < self.max.x && p.y >= self.min.y && p.y < self.max.y
    }

    pub fn sample(&self, rng: &mut StreamRng) -> Vec2<T> {
        let u = T::sample_unit(rng);
        let v = T::sample_unit(rng);
        let p = Vec2::new(self.min.x + u * self.width(), self.min.y + v * self.depth());
        // Rounding can land exactly on the open upper edge.
        Vec2::new(clamp_below(p.x, self.max.x), clamp_below(p.y, self.max.y))
    }
}

fn clamp_below<T: Real>(v: T, hi: T) -> T {
    if v < hi {
        v
    } else {
        // Largest representable value below `hi`.
        let d = hi.abs().max(T::min_positive_value()) * T::epsilon();
        hi - d
    }
}

/// Object categories carried by the marks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Building,
    Pedestrian,
    Tree,
    Vehicle,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Building,
        Category::Pedestrian,
        Category::Tree,
        Category::Vehicle,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Building => "building",
            Category::Pedestrian => "pedestrian",
            Category::Tree => "tree",
            Category::Vehicle => "vehicle",
        }
    }

    pub fn semantic_class(self) -> SemanticClass {
        match self {
            Category::Building => SemanticClass::Building,
            Category::Pedestrian => SemanticClass::Pedestrian,
            Category::Tree => SemanticClass::Tree,
            Category::Vehicle => SemanticClass::Vehicle,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "building" => Ok(Category::Building),
            "pedestrian" => Ok(Category::Pedestrian),
            "tree" => Ok(Category::Tree),
            "vehicle" => Ok(Category::Vehicle),
            other => Err(Error::UnknownCategory(other.to_string())),
        }
    }
}

/// Per-object attributes: class, asset index, scale and yaw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mark<T> {
    pub category: Category,
    pub asset_index: u32,
    pub scale: T,
    /// Yaw about +y, radians.
    pub orientation: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneObject<T> {
    pub position: Vec2<T>,
    pub mark: Mark<T>,
    /// Present iff the object is dynamic.
    pub destination: Option<Vec2<T>>,
    /// Planned route from the birth location to `destination`; empty for
    /// static objects and for unreachable destinations.
    pub path: Vec<Vec2<T>>,
}

impl<T: Real> SceneObject<T> {
    pub fn fixed(position: Vec2<T>, mark: Mark<T>) -> Self {
        Self {
            position,
            mark,
            destination: None,
            path: Vec::new(),
        }
    }

    pub fn is_dynamic(&self) -> bool {
        self.destination.is_some()
    }
}

/// One sampled realization: the complete input to rendering.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneState<T> {
    pub static_objects: Vec<SceneObject<T>>,
    pub dynamic_objects: Vec<SceneObject<T>>,
    pub region: Region<T>,
    pub roads: RoadNetwork<T>,
    pub seed: u64,
    pub dropped: DropCounts,
}

impl<T: Real> SceneState<T> {
    pub fn objects(&self) -> impl Iterator<Item = &SceneObject<T>> {
        self.static_objects.iter().chain(self.dynamic_objects.iter())
    }
}
