//! Triangle soup with a bounding volume hierarchy.

use crate::assets::{GeometrySet, Material};
use crate::labels::SemanticClass;
use crate::math::{Vec2, Vec3};
use crate::real::Real;

#[derive(Clone, Copy, Debug)]
pub struct Ray<T> {
    pub origin: Vec3<T>,
    /// Unit length.
    pub dir: Vec3<T>,
}

impl<T: Real> Ray<T> {
    pub fn new(origin: Vec3<T>, dir: Vec3<T>) -> Self {
        Self { origin, dir }
    }

    pub fn at(&self, t: T) -> Vec3<T> {
        self.origin + self.dir * t
    }
}

/// Nearest intersection along a ray.
#[derive(Clone, Copy, Debug)]
pub struct Hit<'a, T> {
    pub t: T,
    pub point: Vec3<T>,
    /// Geometric normal flipped to face the incoming ray.
    pub normal: Vec3<T>,
    pub uv: Vec2<T>,
    pub class: SemanticClass,
    pub material: &'a Material<T>,
    pub triangle: u32,
}

#[derive(Clone, Copy, Debug)]
struct Triangle<T> {
    v0: Vec3<T>,
    e1: Vec3<T>,
    e2: Vec3<T>,
    normal: Vec3<T>,
    uv: [Vec2<T>; 3],
    class: SemanticClass,
    material: u32,
}

#[derive(Clone, Copy, Debug)]
struct Aabb<T> {
    lo: Vec3<T>,
    hi: Vec3<T>,
}

impl<T: Real> Aabb<T> {
    fn empty() -> Self {
        Self {
            lo: Vec3::splat(T::infinity()),
            hi: Vec3::splat(T::neg_infinity()),
        }
    }

    fn grow(&mut self, p: Vec3<T>) {
        self.lo = self.lo.min(p);
        self.hi = self.hi.max(p);
    }

    fn merge(&mut self, o: &Aabb<T>) {
        self.lo = self.lo.min(o.lo);
        self.hi = self.hi.max(o.hi);
    }

    fn area(&self) -> T {
        let d = self.hi - self.lo;
        if d.x < T::zero() {
            return T::zero();
        }
        (d.x * d.y + d.y * d.z + d.z * d.x) * T::of(2.0)
    }

    /// Entry distance if the ray hits within `(0, t_max)`.
    #[inline]
    fn hit(&self, origin: Vec3<T>, inv: Vec3<T>, t_max: T) -> Option<T> {
        let mut t0 = T::zero();
        let mut t1 = t_max;
        for a in 0..3 {
            let ta = (self.lo[a] - origin[a]) * inv[a];
            let tb = (self.hi[a] - origin[a]) * inv[a];
            let (near, far) = if ta <= tb { (ta, tb) } else { (tb, ta) };
            // NaN (0 * inf) leaves the bound unchanged.
            if near > t0 {
                t0 = near;
            }
            if far < t1 {
                t1 = far;
            }
            if t0 > t1 {
                return None;
            }
        }
        Some(t0)
    }
}

#[derive(Clone, Copy, Debug)]
struct Node<T> {
    bounds: Aabb<T>,
    /// Leaf: first triangle index. Interior: index of the second child (the
    /// first child follows the node directly).
    offset: u32,
    /// Triangle count for leaves, zero for interior nodes.
    count: u32,
    axis: u8,
}

const LEAF_SIZE: usize = 4;
const SAH_BINS: usize = 12;
// Keeps the traversal stack bounded.
const MAX_DEPTH: usize = 60;

/// Immutable render geometry. Safe to share between render threads.
#[derive(Clone, Debug)]
pub struct World<T> {
    triangles: Vec<Triangle<T>>,
    nodes: Vec<Node<T>>,
    materials: Vec<Material<T>>,
}

impl<T: Real> World<T> {
    pub fn new(geometry: &GeometrySet<T>) -> Self {
        let mesh = &geometry.mesh;
        let mut triangles: Vec<Triangle<T>> = (0..mesh.triangle_count())
            .map(|i| {
                let [a, b, c] = mesh.corners(i);
                let idx = mesh.triangles[i];
                Triangle {
                    v0: a,
                    e1: b - a,
                    e2: c - a,
                    normal: (b - a).cross(c - a).normalized(),
                    uv: idx.map(|k| mesh.uvs[k as usize]),
                    class: mesh.classes[i],
                    material: geometry.material_ids[i],
                }
            })
            .collect();
        let mut nodes = Vec::new();
        if !triangles.is_empty() {
            let n = triangles.len();
            build(&mut triangles, 0, n, 0, &mut nodes);
        }
        Self {
            triangles,
            nodes,
            materials: geometry.materials.clone(),
        }
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn materials(&self) -> &[Material<T>] {
        &self.materials
    }

    /// Corners, class and material id of triangle `i` in BVH order.
    pub fn triangle(&self, i: usize) -> ([Vec3<T>; 3], SemanticClass, u32) {
        let t = &self.triangles[i];
        ([t.v0, t.v0 + t.e1, t.v0 + t.e2], t.class, t.material)
    }

    /// Möller–Trumbore; returns `(t, u, v)` for `t` in `(t_min, t_max)`.
    #[inline]
    fn hit_triangle(tri: &Triangle<T>, ray: &Ray<T>, t_min: T, t_max: T) -> Option<(T, T, T)> {
        let p = ray.dir.cross(tri.e2);
        let det = tri.e1.dot(p);
        if det.abs() < T::min_positive_value() {
            return None;
        }
        let inv = T::one() / det;
        let s = ray.origin - tri.v0;
        let u = s.dot(p) * inv;
        if u < T::zero() || u > T::one() {
            return None;
        }
        let q = s.cross(tri.e1);
        let v = ray.dir.dot(q) * inv;
        if v < T::zero() || u + v > T::one() {
            return None;
        }
        let t = tri.e2.dot(q) * inv;
        (t > t_min && t < t_max).then_some((t, u, v))
    }

    fn traverse(&self, ray: &Ray<T>, t_min: T, mut t_max: T, any: bool) -> Option<(usize, T, T, T)> {
        if self.nodes.is_empty() {
            return None;
        }
        let inv = Vec3::new(T::one() / ray.dir.x, T::one() / ray.dir.y, T::one() / ray.dir.z);
        let neg = [ray.dir.x < T::zero(), ray.dir.y < T::zero(), ray.dir.z < T::zero()];
        let mut best = None;
        let mut stack = [0u32; 64];
        let mut sp = 1;
        while sp > 0 {
            sp -= 1;
            let node = &self.nodes[stack[sp] as usize];
            if node.bounds.hit(ray.origin, inv, t_max).is_none() {
                continue;
            }
            if node.count > 0 {
                let start = node.offset as usize;
                for i in start..start + node.count as usize {
                    if let Some((t, u, v)) = Self::hit_triangle(&self.triangles[i], ray, t_min, t_max) {
                        t_max = t;
                        best = Some((i, t, u, v));
                        if any {
                            return best;
                        }
                    }
                }
            } else {
                let first = stack[sp] + 1;
                let second = node.offset;
                // Visit the near child first.
                let (near, far) = if neg[node.axis as usize] { (second, first) } else { (first, second) };
                stack[sp] = far;
                stack[sp + 1] = near;
                sp += 2;
            }
        }
        best
    }

    /// Nearest hit with `t > T::RAY_EPSILON`, or `None` for the sky.
    pub fn intersect(&self, ray: &Ray<T>) -> Option<Hit<'_, T>> {
        self.intersect_range(ray, T::RAY_EPSILON, T::infinity())
    }

    pub fn intersect_range(&self, ray: &Ray<T>, t_min: T, t_max: T) -> Option<Hit<'_, T>> {
        let (i, t, u, v) = self.traverse(ray, t_min, t_max, false)?;
        let tri = &self.triangles[i];
        let w = T::one() - u - v;
        let uv = Vec2::new(
            tri.uv[0].x * w + tri.uv[1].x * u + tri.uv[2].x * v,
            tri.uv[0].y * w + tri.uv[1].y * u + tri.uv[2].y * v,
        );
        let normal = if tri.normal.dot(ray.dir) > T::zero() { -tri.normal } else { tri.normal };
        Some(Hit {
            t,
            point: ray.at(t),
            normal,
            uv,
            class: tri.class,
            material: &self.materials[tri.material as usize],
            triangle: i as u32,
        })
    }

    /// Whether anything blocks the ray within `(T::RAY_EPSILON, t_max)`.
    pub fn occluded(&self, ray: &Ray<T>, t_max: T) -> bool {
        self.traverse(ray, T::RAY_EPSILON, t_max, true).is_some()
    }
}

fn centroid<T: Real>(t: &Triangle<T>) -> Vec3<T> {
    t.v0 + (t.e1 + t.e2) / T::of(3.0)
}

fn tri_bounds<T: Real>(t: &Triangle<T>) -> Aabb<T> {
    let mut b = Aabb::empty();
    b.grow(t.v0);
    b.grow(t.v0 + t.e1);
    b.grow(t.v0 + t.e2);
    b
}

/// Binned SAH build over `tris[start..end]`; returns the node index.
fn build<T: Real>(tris: &mut [Triangle<T>], start: usize, end: usize, depth: usize, nodes: &mut Vec<Node<T>>) -> usize {
    let mut bounds = Aabb::empty();
    let mut cbounds = Aabb::empty();
    for t in &tris[start..end] {
        bounds.merge(&tri_bounds(t));
        cbounds.grow(centroid(t));
    }
    let me = nodes.len();
    nodes.push(Node {
        bounds,
        offset: start as u32,
        count: (end - start) as u32,
        axis: 0,
    });
    let n = end - start;
    if n <= LEAF_SIZE || depth >= MAX_DEPTH {
        return me;
    }
    let extent = cbounds.hi - cbounds.lo;
    let axis = if extent.x >= extent.y && extent.x >= extent.z {
        0
    } else if extent.y >= extent.z {
        1
    } else {
        2
    };
    if !(extent[axis] > T::zero()) {
        return me;
    }

    let bin_of = |t: &Triangle<T>| {
        let f = (centroid(t)[axis] - cbounds.lo[axis]) / extent[axis] * T::of(SAH_BINS as f64);
        f.to_usize().unwrap_or(0).min(SAH_BINS - 1)
    };
    let mut bin_bounds = [Aabb::empty(); SAH_BINS];
    let mut bin_count = [0usize; SAH_BINS];
    for t in &tris[start..end] {
        let b = bin_of(t);
        bin_count[b] += 1;
        bin_bounds[b].merge(&tri_bounds(t));
    }
    let mut best_cost = T::infinity();
    let mut best_split = 0;
    for split in 1..SAH_BINS {
        let (mut left, mut right) = (Aabb::empty(), Aabb::empty());
        let (mut nl, mut nr) = (0, 0);
        for b in 0..split {
            left.merge(&bin_bounds[b]);
            nl += bin_count[b];
        }
        for b in split..SAH_BINS {
            right.merge(&bin_bounds[b]);
            nr += bin_count[b];
        }
        if nl == 0 || nr == 0 {
            continue;
        }
        let cost = left.area() * T::from_usize(nl).unwrap() + right.area() * T::from_usize(nr).unwrap();
        if cost < best_cost {
            best_cost = cost;
            best_split = split;
        }
    }

    let mid = if best_split == 0 {
        // All centroids in one bin: fall back to a median split.
        tris[start..end].sort_by(|a, b| centroid(a)[axis].partial_cmp(&centroid(b)[axis]).unwrap());
        start + n / 2
    } else {
        let mut i = start;
        for j in start..end {
            if bin_of(&tris[j]) < best_split {
                tris.swap(i, j);
                i += 1;
            }
        }
        i
    };

    build(tris, start, mid, depth + 1, nodes);
    let second = build(tris, mid, end, depth + 1, nodes);
    nodes[me].offset = second as u32;
    nodes[me].count = 0;
    nodes[me].axis = axis as u8;
    me
}
