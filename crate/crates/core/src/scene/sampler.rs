use crate::error::Result;
use crate::math::Vec2;
use crate::real::Real;
use crate::rng::{scene_stream, Stage};

use super::process::{apply_repulsion, sample_count, sample_marks, Domain, MarkPriors, PointProcessConfig};
use super::roads::{RoadGridConfig, RoadNetwork};
use super::{Region, SceneObject, SceneState};

/// One marked point process: spatial prior plus mark prior.
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessSpec<T> {
    pub process: PointProcessConfig<T>,
    pub priors: MarkPriors<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneConfig<T> {
    pub region: Region<T>,
    pub roads: RoadGridConfig<T>,
    pub static_objects: ProcessSpec<T>,
    pub dynamic_objects: ProcessSpec<T>,
    /// Treat road cells as forbidden for static objects.
    pub static_avoid_roads: bool,
    /// Fraction along its planned path at which each dynamic object is
    /// placed for the rendered frame; 0 keeps the birth location.
    pub path_fraction: T,
}

impl<T: Real> SceneConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.static_objects.process.validate()?;
        self.static_objects.priors.validate()?;
        self.dynamic_objects.process.validate()?;
        self.dynamic_objects.priors.validate()?;
        if !(self.path_fraction >= T::zero() && self.path_fraction <= T::one()) {
            return Err(crate::Error::Config(format!(
                "path_fraction must lie in [0, 1], got {}",
                self.path_fraction
            )));
        }
        Ok(())
    }

    pub fn road_network(&self) -> Result<RoadNetwork<T>> {
        RoadNetwork::manhattan(&self.region, &self.roads)
    }
}

/// Points removed by the hard-core constraint.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DropCounts {
    pub static_objects: usize,
    pub dynamic_objects: usize,
}

/// Samples the static and dynamic processes. A pure function of
/// `(config, roads, seed)`; each stage reads its own random stream.
pub fn sample_scene<T: Real>(config: &SceneConfig<T>, roads: &RoadNetwork<T>, seed: u64) -> Result<SceneState<T>> {
    config.validate()?;

    let static_domain = if config.static_avoid_roads {
        Domain::OffRoad {
            region: config.region,
            roads,
        }
    } else {
        Domain::Region(config.region)
    };
    let (static_objects, static_dropped) = sample_process(
        &config.static_objects,
        &static_domain,
        seed,
        [Stage::StaticCount, Stage::StaticLocations, Stage::StaticMarks, Stage::StaticRepulsion],
    );

    let road_domain = Domain::Roads(roads);
    let (mut dynamic_objects, dynamic_dropped) = sample_process(
        &config.dynamic_objects,
        &road_domain,
        seed,
        [Stage::DynamicCount, Stage::DynamicLocations, Stage::DynamicMarks, Stage::DynamicRepulsion],
    );

    let mut rng = scene_stream(seed, Stage::Destinations);
    for obj in &mut dynamic_objects {
        let (c, r) = roads.sample_cell(&mut rng);
        let dest = roads.cell_center(c, r);
        obj.destination = Some(dest);
        if let Some(path) = roads.plan_path(obj.position, dest)? {
            if config.path_fraction > T::zero() {
                obj.position = path.point_at(config.path_fraction);
            }
            obj.path = path.waypoints;
        }
    }

    Ok(SceneState {
        static_objects,
        dynamic_objects,
        region: config.region,
        roads: roads.clone(),
        seed,
        dropped: DropCounts {
            static_objects: static_dropped,
            dynamic_objects: dynamic_dropped,
        },
    })
}

fn sample_process<T: Real>(
    spec: &ProcessSpec<T>,
    domain: &Domain<'_, T>,
    seed: u64,
    stages: [Stage; 4],
) -> (Vec<SceneObject<T>>, usize) {
    let n = sample_count(&spec.process, domain.area(), &mut scene_stream(seed, stages[0]));
    let mut loc_rng = scene_stream(seed, stages[1]);
    let positions: Vec<Vec2<T>> = (0..n).map(|_| domain.sample(&mut loc_rng)).collect();
    let marks = sample_marks(n, &spec.priors, &mut scene_stream(seed, stages[2]));
    let objects = positions
        .into_iter()
        .zip(marks)
        .map(|(p, m)| SceneObject::fixed(p, m))
        .collect();
    let out = apply_repulsion(objects, &spec.process, domain, &mut scene_stream(seed, stages[3]));
    (out.objects, out.dropped)
}
