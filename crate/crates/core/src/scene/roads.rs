//! Road occupancy lattice and shortest-path planning over it.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::math::Vec2;
use crate::real::Real;
use crate::rng::StreamRng;

use super::Region;

/// Manhattan road grid parameters, meters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoadGridConfig<T> {
    pub cell_size: T,
    /// Distance between parallel road strips.
    pub spacing: T,
    /// Width of each strip.
    pub width: T,
}

/// Occupancy grid over the ground region. Road cells form the graph used for
/// dynamic objects: nodes are road cells, edges join 4-adjacent road cells.
#[derive(Clone, Debug, PartialEq)]
pub struct RoadNetwork<T> {
    origin: Vec2<T>,
    cell_size: T,
    cols: usize,
    rows: usize,
    road: Vec<bool>,
    road_cells: Vec<usize>,
}

/// Waypoints at road cell centers; consecutive waypoints are 4-adjacent.
#[derive(Clone, Debug, PartialEq)]
pub struct Path<T> {
    pub cells: Vec<(usize, usize)>,
    pub waypoints: Vec<Vec2<T>>,
}

impl<T> Path<T> {
    /// Number of unit grid moves.
    pub fn edges(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }
}

impl<T: Real> Path<T> {
    /// Point at arc-length fraction `f ∈ [0, 1]` along the polyline.
    pub fn point_at(&self, f: T) -> Vec2<T> {
        let n = self.waypoints.len();
        if n == 1 || f <= T::zero() {
            return self.waypoints[0];
        }
        if f >= T::one() {
            return self.waypoints[n - 1];
        }
        let pos = f * T::from_usize(n - 1).unwrap();
        let i = pos.floor().to_usize().unwrap().min(n - 2);
        let t = pos - T::from_usize(i).unwrap();
        let a = self.waypoints[i];
        let b = self.waypoints[i + 1];
        a + (b - a) * t
    }
}

impl<T: Real> RoadNetwork<T> {
    /// Builds a network from an explicit occupancy grid, row-major with
    /// `cells[row * cols + col]`.
    pub fn from_grid(origin: Vec2<T>, cell_size: T, cols: usize, rows: usize, cells: Vec<bool>) -> Result<Self> {
        if !(cell_size > T::zero()) || !cell_size.is_finite() {
            return Err(Error::Config(format!("road cell size must be positive, got {cell_size}")));
        }
        if cols == 0 || rows == 0 || cells.len() != cols * rows {
            return Err(Error::Config(format!(
                "road grid of {cols}x{rows} needs {} cells, got {}",
                cols * rows,
                cells.len()
            )));
        }
        let road_cells: Vec<usize> = cells.iter().enumerate().filter(|(_, &r)| r).map(|(i, _)| i).collect();
        if road_cells.is_empty() {
            return Err(Error::Config("road grid has no road cells".into()));
        }
        Ok(Self {
            origin,
            cell_size,
            cols,
            rows,
            road: cells,
            road_cells,
        })
    }

    /// Manhattan grid of strips along both axes, starting at the region's
    /// minimum corner.
    pub fn manhattan(region: &Region<T>, cfg: &RoadGridConfig<T>) -> Result<Self> {
        if !(cfg.width > T::zero()) || !(cfg.spacing > cfg.width) {
            return Err(Error::Config(format!(
                "road spacing ({}) must exceed road width ({}) > 0",
                cfg.spacing, cfg.width
            )));
        }
        let cols = (region.width() / cfg.cell_size).floor().to_usize().unwrap_or(0);
        let rows = (region.depth() / cfg.cell_size).floor().to_usize().unwrap_or(0);
        let half = T::of(0.5);
        let on_strip = |offset: T| (offset % cfg.spacing) < cfg.width;
        let mut cells = Vec::with_capacity(cols * rows);
        for r in 0..rows {
            for c in 0..cols {
                let ox = (T::from_usize(c).unwrap() + half) * cfg.cell_size;
                let oz = (T::from_usize(r).unwrap() + half) * cfg.cell_size;
                cells.push(on_strip(ox) || on_strip(oz));
            }
        }
        Self::from_grid(region.min(), cfg.cell_size, cols, rows, cells)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cell_size(&self) -> T {
        self.cell_size
    }

    pub fn origin(&self) -> Vec2<T> {
        self.origin
    }

    pub fn is_road(&self, col: usize, row: usize) -> bool {
        col < self.cols && row < self.rows && self.road[row * self.cols + col]
    }

    pub fn road_cell_count(&self) -> usize {
        self.road_cells.len()
    }

    pub fn road_area(&self) -> T {
        T::from_usize(self.road_cells.len()).unwrap() * self.cell_size * self.cell_size
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.road
    }

    pub fn cell_of(&self, p: Vec2<T>) -> Option<(usize, usize)> {
        let fx = (p.x - self.origin.x) / self.cell_size;
        let fz = (p.y - self.origin.y) / self.cell_size;
        if !(fx >= T::zero() && fz >= T::zero()) {
            return None;
        }
        let c = fx.floor().to_usize()?;
        let r = fz.floor().to_usize()?;
        (c < self.cols && r < self.rows).then_some((c, r))
    }

    pub fn is_road_point(&self, p: Vec2<T>) -> bool {
        self.cell_of(p).is_some_and(|(c, r)| self.is_road(c, r))
    }

    pub fn cell_center(&self, col: usize, row: usize) -> Vec2<T> {
        let half = T::of(0.5);
        Vec2::new(
            self.origin.x + (T::from_usize(col).unwrap() + half) * self.cell_size,
            self.origin.y + (T::from_usize(row).unwrap() + half) * self.cell_size,
        )
    }

    /// Road cell picked uniformly: `(col, row)`.
    pub fn sample_cell(&self, rng: &mut StreamRng) -> (usize, usize) {
        let u = T::sample_unit(rng);
        let k = (u * T::from_usize(self.road_cells.len()).unwrap())
            .to_usize()
            .unwrap_or(0)
            .min(self.road_cells.len() - 1);
        let i = self.road_cells[k];
        (i % self.cols, i / self.cols)
    }

    /// Point uniform over the union of road cells.
    pub fn sample_point(&self, rng: &mut StreamRng) -> Vec2<T> {
        let (c, r) = self.sample_cell(rng);
        let u = T::sample_unit(rng);
        let v = T::sample_unit(rng);
        // Keep strictly inside the cell so `cell_of` maps back to it.
        let inset = T::of(1e-3);
        let span = T::one() - inset - inset;
        Vec2::new(
            self.origin.x + (T::from_usize(c).unwrap() + inset + u * span) * self.cell_size,
            self.origin.y + (T::from_usize(r).unwrap() + inset + v * span) * self.cell_size,
        )
    }

    fn neighbors(&self, col: usize, row: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cand = [
            (col.wrapping_sub(1), row),
            (col + 1, row),
            (col, row.wrapping_sub(1)),
            (col, row + 1),
        ];
        cand.into_iter().filter(move |&(c, r)| self.is_road(c, r))
    }

    /// A* over 4-connected road cells with unit edge cost and a Euclidean
    /// heuristic. `Ok(None)` when the goal is unreachable.
    pub fn plan_path(&self, start: Vec2<T>, goal: Vec2<T>) -> Result<Option<Path<T>>> {
        let s = self.road_cell_at(start)?;
        let g = self.road_cell_at(goal)?;
        Ok(self.plan_cells(s, g))
    }

    fn road_cell_at(&self, p: Vec2<T>) -> Result<(usize, usize)> {
        self.cell_of(p)
            .filter(|&(c, r)| self.is_road(c, r))
            .ok_or(Error::OffRoad {
                x: p.x.as_f64(),
                y: p.y.as_f64(),
            })
    }

    pub fn plan_cells(&self, start: (usize, usize), goal: (usize, usize)) -> Option<Path<T>> {
        if !self.is_road(start.0, start.1) || !self.is_road(goal.0, goal.1) {
            return None;
        }
        let idx = |(c, r): (usize, usize)| r * self.cols + c;
        let h = |(c, r): (usize, usize)| {
            let dx = c as f64 - goal.0 as f64;
            let dz = r as f64 - goal.1 as f64;
            (dx * dx + dz * dz).sqrt()
        };
        let n = self.cols * self.rows;
        let mut cost = vec![u32::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut closed = vec![false; n];
        let mut open = BinaryHeap::new();
        let mut tick = 0u64;
        cost[idx(start)] = 0;
        open.push(OpenNode {
            f: h(start),
            g: 0,
            tick,
            cell: start,
        });
        while let Some(node) = open.pop() {
            let i = idx(node.cell);
            if closed[i] {
                continue;
            }
            closed[i] = true;
            if node.cell == goal {
                let mut cells = vec![goal];
                let mut cur = i;
                while parent[cur] != usize::MAX {
                    cur = parent[cur];
                    cells.push((cur % self.cols, cur / self.cols));
                }
                cells.reverse();
                let waypoints = cells.iter().map(|&(c, r)| self.cell_center(c, r)).collect();
                return Some(Path { cells, waypoints });
            }
            for nb in self.neighbors(node.cell.0, node.cell.1) {
                let j = idx(nb);
                let g = node.g + 1;
                if !closed[j] && g < cost[j] {
                    cost[j] = g;
                    parent[j] = i;
                    tick += 1;
                    open.push(OpenNode {
                        f: g as f64 + h(nb),
                        g,
                        tick,
                        cell: nb,
                    });
                }
            }
        }
        None
    }
}

struct OpenNode {
    f: f64,
    g: u32,
    tick: u64,
    cell: (usize, usize),
}

impl PartialEq for OpenNode {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenNode {}

impl PartialOrd for OpenNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenNode {
    // Min-heap on f; deeper nodes first on ties, then FIFO.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(self.g.cmp(&other.g))
            .then(other.tick.cmp(&self.tick))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corridor(len: usize) -> RoadNetwork<f64> {
        RoadNetwork::from_grid(Vec2::new(0.0, 0.0), 1.0, len, 1, vec![true; len]).unwrap()
    }

    #[test]
    fn same_start_and_goal_is_a_single_waypoint() {
        let net = corridor(5);
        let p = net.plan_path(Vec2::new(2.5, 0.5), Vec2::new(2.2, 0.7)).unwrap().unwrap();
        assert_eq!(p.waypoints.len(), 1);
        assert_eq!(p.edges(), 0);
    }

    #[test]
    fn straight_corridor_of_five_cells_takes_four_moves() {
        let net = corridor(5);
        let p = net.plan_path(Vec2::new(0.5, 0.5), Vec2::new(4.5, 0.5)).unwrap().unwrap();
        assert_eq!(p.edges(), 4);
        assert_eq!(p.cells, vec![(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]);
    }

    #[test]
    fn unreachable_goal_is_reported_not_panicked() {
        let mut cells = vec![true; 5];
        cells[2] = false;
        let net = RoadNetwork::from_grid(Vec2::new(0.0, 0.0), 1.0, 5, 1, cells).unwrap();
        assert!(net.plan_path(Vec2::new(0.5, 0.5), Vec2::new(4.5, 0.5)).unwrap().is_none());
    }

    #[test]
    fn off_road_endpoints_are_errors() {
        let mut cells = vec![true; 5];
        cells[2] = false;
        let net = RoadNetwork::from_grid(Vec2::new(0.0, 0.0), 1.0, 5, 1, cells).unwrap();
        assert!(matches!(
            net.plan_path(Vec2::new(2.5, 0.5), Vec2::new(4.5, 0.5)),
            Err(Error::OffRoad { .. })
        ));
        assert!(net.plan_path(Vec2::new(-1.0, 0.5), Vec2::new(4.5, 0.5)).is_err());
    }

    #[test]
    fn empty_grid_is_rejected() {
        assert!(RoadNetwork::<f64>::from_grid(Vec2::new(0.0, 0.0), 1.0, 3, 1, vec![false; 3]).is_err());
    }

    #[test]
    fn manhattan_strips_follow_spacing_and_width() {
        let region = Region::new(Vec2::new(0.0, 0.0), Vec2::new(40.0, 40.0)).unwrap();
        let cfg = RoadGridConfig {
            cell_size: 2.0,
            spacing: 20.0,
            width: 6.0,
        };
        let net = RoadNetwork::manhattan(&region, &cfg).unwrap();
        assert_eq!((net.cols(), net.rows()), (20, 20));
        // Columns 0..3 and 10..13 (cell centers 1,3,5 and 21,23,25) are road.
        for r in 0..20 {
            for c in 0..20 {
                let x_road = c % 10 < 3;
                let z_road = r % 10 < 3;
                assert_eq!(net.is_road(c, r), x_road || z_road, "cell {c},{r}");
            }
        }
        assert!(net.is_road_point(Vec2::new(1.0, 15.0)));
        assert!(!net.is_road_point(Vec2::new(15.0, 15.0)));
    }

    #[test]
    fn point_along_path_interpolates() {
        let net = corridor(5);
        let p = net.plan_cells((0, 0), (4, 0)).unwrap();
        assert_eq!(p.point_at(0.0), Vec2::new(0.5, 0.5));
        assert_eq!(p.point_at(1.0), Vec2::new(4.5, 0.5));
        assert_eq!(p.point_at(0.5), Vec2::new(2.5, 0.5));
    }
}
