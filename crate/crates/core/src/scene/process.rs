//! Homogeneous marked Poisson process primitives and the hard-core repulsion
//! that enforces minimum separation between sampled objects.

use rand::RngCore;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::math::Vec2;
use crate::real::Real;
use crate::rng::StreamRng;

use super::{Category, Mark, Region, RoadNetwork, SceneObject};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointProcessConfig<T> {
    /// Expected objects per square meter.
    pub intensity: T,
    /// Minimum separation per category, meters. Two objects must be at least
    /// the larger of their two radii apart.
    pub hard_core_radius: [T; 4],
    /// Re-draws attempted for a conflicting point before it is dropped.
    pub max_rejection_rounds: u32,
}

impl<T: Real> PointProcessConfig<T> {
    pub fn new(intensity: T, radius: T) -> Self {
        Self {
            intensity,
            hard_core_radius: [radius; 4],
            max_rejection_rounds: 30,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.intensity.is_finite() || self.intensity < T::zero() {
            return Err(Error::Config(format!("intensity must be finite and >= 0, got {}", self.intensity)));
        }
        if self.hard_core_radius.iter().any(|r| !r.is_finite() || *r < T::zero()) {
            return Err(Error::Config("hard-core radii must be finite and >= 0".into()));
        }
        if self.max_rejection_rounds == 0 {
            return Err(Error::Config("max_rejection_rounds must be positive".into()));
        }
        Ok(())
    }

    pub fn pair_distance(&self, a: Category, b: Category) -> T {
        self.hard_core_radius[a.index()].max(self.hard_core_radius[b.index()])
    }
}

/// Factored mark prior: independent category, asset index, scale and yaw.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkPriors<T> {
    /// Probability per category, indexed by `Category::index`.
    pub category_weights: [T; 4],
    pub scale_range: [(T, T); 4],
    pub orientation_range: (T, T),
    pub asset_counts: [u32; 4],
}

impl<T: Real> MarkPriors<T> {
    pub fn uniform_over(categories: &[Category], asset_counts: [u32; 4]) -> Self {
        let mut w = [T::zero(); 4];
        let p = T::one() / T::from_usize(categories.len().max(1)).unwrap();
        for c in categories {
            w[c.index()] = p;
        }
        Self {
            category_weights: w,
            scale_range: [(T::one(), T::one()); 4],
            orientation_range: (T::zero(), T::TAU()),
            asset_counts,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let sum: T = self.category_weights.iter().copied().sum();
        if self.category_weights.iter().any(|w| !w.is_finite() || *w < T::zero()) {
            return Err(Error::Config("category weights must be finite and >= 0".into()));
        }
        if (sum - T::one()).abs() > T::of(1e-6) {
            return Err(Error::Config(format!("category weights sum to {sum}, expected 1")));
        }
        for c in Category::ALL {
            if self.category_weights[c.index()] > T::zero() {
                let (lo, hi) = self.scale_range[c.index()];
                if !(lo > T::zero() && hi >= lo && hi.is_finite()) {
                    return Err(Error::Config(format!("scale range of {c} must be positive, got [{lo}, {hi}]")));
                }
                if self.asset_counts[c.index()] == 0 {
                    return Err(Error::Config(format!("{c} has positive weight but no assets")));
                }
            }
        }
        let (a, b) = self.orientation_range;
        if !(a.is_finite() && b.is_finite() && b >= a) {
            return Err(Error::Config("orientation range must be a finite interval".into()));
        }
        Ok(())
    }

    fn draw_category(&self, u: T) -> Category {
        let mut acc = T::zero();
        let mut last = None;
        for c in Category::ALL {
            let w = self.category_weights[c.index()];
            if w > T::zero() {
                acc = acc + w;
                last = Some(c);
                if u < acc {
                    return c;
                }
            }
        }
        // Rounding left a sliver above the cumulative sum.
        last.expect("validated priors have a positive weight")
    }
}

/// Where points live: the whole region, the region minus road cells, or the
/// road cells only.
#[derive(Clone, Copy, Debug)]
pub enum Domain<'a, T> {
    Region(Region<T>),
    OffRoad {
        region: Region<T>,
        roads: &'a RoadNetwork<T>,
    },
    Roads(&'a RoadNetwork<T>),
}

impl<T: Real> Domain<'_, T> {
    pub fn area(&self) -> T {
        match self {
            Domain::Region(r) => r.area(),
            Domain::OffRoad { region, roads } => region.area() - roads.road_area(),
            Domain::Roads(roads) => roads.road_area(),
        }
    }

    pub fn contains(&self, p: Vec2<T>) -> bool {
        match self {
            Domain::Region(r) => r.contains(p),
            Domain::OffRoad { region, roads } => region.contains(p) && !roads.is_road_point(p),
            Domain::Roads(roads) => roads.is_road_point(p),
        }
    }

    pub fn sample(&self, rng: &mut StreamRng) -> Vec2<T> {
        match self {
            Domain::Region(r) => r.sample(rng),
            Domain::OffRoad { region, roads } => loop {
                let p = region.sample(rng);
                if !roads.is_road_point(p) {
                    break p;
                }
            },
            Domain::Roads(roads) => roads.sample_point(rng),
        }
    }
}

/// Number of points of a homogeneous Poisson process with the configured
/// intensity over an area.
pub fn sample_count<T: Real>(config: &PointProcessConfig<T>, area: T, rng: &mut StreamRng) -> usize {
    let mean = (config.intensity * area).as_f64();
    if !(mean > 0.0) {
        return 0;
    }
    let dist = Poisson::new(mean).expect("finite positive mean");
    let n: f64 = dist.sample(rng);
    n as usize
}

/// `n` i.i.d. uniform points on `region`.
pub fn sample_locations<T: Real>(n: usize, region: &Region<T>, rng: &mut StreamRng) -> Vec<Vec2<T>> {
    (0..n).map(|_| region.sample(rng)).collect()
}

/// `n` independent marks from the factored prior.
pub fn sample_marks<T: Real>(n: usize, priors: &MarkPriors<T>, rng: &mut StreamRng) -> Vec<Mark<T>> {
    (0..n)
        .map(|_| {
            let category = priors.draw_category(T::sample_unit(rng));
            let count = priors.asset_counts[category.index()].max(1);
            let asset_index = ((rng.next_u64() as u128 * count as u128) >> 64) as u32;
            let (lo, hi) = priors.scale_range[category.index()];
            let scale = lo + (hi - lo) * T::sample_unit(rng);
            let (a, b) = priors.orientation_range;
            let orientation = a + (b - a) * T::sample_unit(rng);
            Mark {
                category,
                asset_index,
                scale,
                orientation,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Repulsion<T> {
    pub objects: Vec<SceneObject<T>>,
    pub dropped: usize,
}

/// Hard-core Gibbs constraint (infinite energy inside the pair distance, zero
/// outside) by sequential dart throwing: each point that conflicts with an
/// already accepted one, or lies outside `domain`, is re-drawn from `domain`
/// up to `max_rejection_rounds` times and dropped if it never fits.
pub fn apply_repulsion<T: Real>(
    objects: Vec<SceneObject<T>>,
    config: &PointProcessConfig<T>,
    domain: &Domain<'_, T>,
    rng: &mut StreamRng,
) -> Repulsion<T> {
    let mut accepted: Vec<SceneObject<T>> = Vec::with_capacity(objects.len());
    let mut dropped = 0;
    for mut obj in objects {
        let fits = |p: Vec2<T>, acc: &[SceneObject<T>]| {
            domain.contains(p)
                && acc.iter().all(|o| {
                    let d = config.pair_distance(o.mark.category, obj.mark.category);
                    o.position.distance(p) >= d
                })
        };
        let mut candidate = obj.position;
        let mut placed = fits(candidate, &accepted);
        let mut round = 0;
        while !placed && round < config.max_rejection_rounds {
            candidate = domain.sample(rng);
            placed = fits(candidate, &accepted);
            round += 1;
        }
        if placed {
            obj.position = candidate;
            accepted.push(obj);
        } else {
            dropped += 1;
        }
    }
    Repulsion {
        objects: accepted,
        dropped,
    }
}
