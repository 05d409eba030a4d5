//! Indexed triangle meshes and the convex primitives the procedural assets
//! are assembled from.

use crate::error::{Error, Result};
use crate::labels::SemanticClass;
use crate::math::{Vec2, Vec3};
use crate::real::Real;

/// Triangles with area at or below this are rejected, m².
pub const MIN_TRIANGLE_AREA: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh<T> {
    pub positions: Vec<Vec3<T>>,
    /// Texture coordinates in meters along the surface.
    pub uvs: Vec<Vec2<T>>,
    pub triangles: Vec<[u32; 3]>,
    pub classes: Vec<SemanticClass>,
}

impl<T: Real> Default for Mesh<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Mesh<T> {
    pub fn new() -> Self {
        Self {
            positions: Vec::new(),
            uvs: Vec::new(),
            triangles: Vec::new(),
            classes: Vec::new(),
        }
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn corners(&self, tri: usize) -> [Vec3<T>; 3] {
        self.triangles[tri].map(|i| self.positions[i as usize])
    }

    pub fn triangle_area(&self, tri: usize) -> T {
        let [a, b, c] = self.corners(tri);
        (b - a).cross(c - a).length() * T::of(0.5)
    }

    /// Unit normal from the counter-clockwise winding.
    pub fn triangle_normal(&self, tri: usize) -> Vec3<T> {
        let [a, b, c] = self.corners(tri);
        (b - a).cross(c - a).normalized()
    }

    /// Checks index ranges, attribute lengths and triangle areas.
    pub fn validate(&self) -> Result<()> {
        if self.uvs.len() != self.positions.len() || self.classes.len() != self.triangles.len() {
            return Err(Error::Config("mesh attribute arrays disagree in length".into()));
        }
        let n = self.positions.len() as u32;
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= n) {
                return Err(Error::Config(format!("triangle {t} indexes past {n} vertices")));
            }
            if !(self.triangle_area(t).as_f64() > MIN_TRIANGLE_AREA) {
                return Err(Error::Config(format!("triangle {t} is degenerate")));
            }
        }
        Ok(())
    }

    pub fn append(&mut self, other: &Mesh<T>) {
        let base = self.positions.len() as u32;
        self.positions.extend_from_slice(&other.positions);
        self.uvs.extend_from_slice(&other.uvs);
        self.triangles
            .extend(other.triangles.iter().map(|t| t.map(|i| i + base)));
        self.classes.extend_from_slice(&other.classes);
    }

    pub fn scaled(&self, s: T) -> Mesh<T> {
        let mut m = self.clone();
        for p in &mut m.positions {
            *p = *p * s;
        }
        m
    }

    /// Yaw by `angle` about +y, then translate.
    pub fn transformed(&self, angle: T, offset: Vec3<T>) -> Mesh<T> {
        let mut m = self.clone();
        for p in &mut m.positions {
            *p = p.rotate_y(angle) + offset;
        }
        m
    }

    pub fn bounds(&self) -> Option<(Vec3<T>, Vec3<T>)> {
        let first = *self.positions.first()?;
        Some(
            self.positions
                .iter()
                .fold((first, first), |(lo, hi), &p| (lo.min(p), hi.max(p))),
        )
    }

    /// Adds a triangle wound so its normal points away from `interior`.
    pub fn push_outward(&mut self, corners: [Vec3<T>; 3], uvs: [Vec2<T>; 3], interior: Vec3<T>, class: SemanticClass) {
        let [a, b, c] = corners;
        let n = (b - a).cross(c - a);
        let centroid = (a + b + c) / T::of(3.0);
        let flip = n.dot(centroid - interior) < T::zero();
        let base = self.positions.len() as u32;
        let order: [usize; 3] = if flip { [0, 2, 1] } else { [0, 1, 2] };
        for k in order {
            self.positions.push(corners[k]);
            self.uvs.push(uvs[k]);
        }
        self.triangles.push([base, base + 1, base + 2]);
        self.classes.push(class);
    }

    fn push_quad_outward(&mut self, q: [Vec3<T>; 4], uv: [Vec2<T>; 4], interior: Vec3<T>, class: SemanticClass) {
        self.push_outward([q[0], q[1], q[2]], [uv[0], uv[1], uv[2]], interior, class);
        self.push_outward([q[0], q[2], q[3]], [uv[0], uv[2], uv[3]], interior, class);
    }
}

/// Axis-aligned box from `min` to `max`, normals outward.
pub fn cuboid<T: Real>(min: Vec3<T>, max: Vec3<T>, class: SemanticClass) -> Mesh<T> {
    let mut m = Mesh::new();
    let center = (min + max) * T::of(0.5);
    let c = |x: bool, y: bool, z: bool| {
        Vec3::new(
            if x { max.x } else { min.x },
            if y { max.y } else { min.y },
            if z { max.z } else { min.z },
        )
    };
    let (sx, sy, sz) = (max.x - min.x, max.y - min.y, max.z - min.z);
    let uv = |w: T, h: T| {
        [
            Vec2::new(T::zero(), T::zero()),
            Vec2::new(w, T::zero()),
            Vec2::new(w, h),
            Vec2::new(T::zero(), h),
        ]
    };
    // -z, +z, -x, +x, -y, +y
    let faces = [
        ([c(false, false, false), c(true, false, false), c(true, true, false), c(false, true, false)], uv(sx, sy)),
        ([c(false, false, true), c(true, false, true), c(true, true, true), c(false, true, true)], uv(sx, sy)),
        ([c(false, false, false), c(false, false, true), c(false, true, true), c(false, true, false)], uv(sz, sy)),
        ([c(true, false, false), c(true, false, true), c(true, true, true), c(true, true, false)], uv(sz, sy)),
        ([c(false, false, false), c(true, false, false), c(true, false, true), c(false, false, true)], uv(sx, sz)),
        ([c(false, true, false), c(true, true, false), c(true, true, true), c(false, true, true)], uv(sx, sz)),
    ];
    for (q, t) in faces {
        m.push_quad_outward(q, t, center, class);
    }
    m
}

/// Convex solid of revolution about the y axis. `profile` lists `(radius, y)`
/// from the bottom pole to the top pole; the first and last radii should be
/// zero to close the solid, and radii must describe a convex outline.
pub fn lathe<T: Real>(profile: &[(T, T)], segments: usize, center: Vec3<T>, class: SemanticClass) -> Mesh<T> {
    let mut m = Mesh::new();
    let y_mid = (profile[0].1 + profile[profile.len() - 1].1) * T::of(0.5);
    let interior = Vec3::new(center.x, y_mid, center.z);
    let seg = T::from_usize(segments).unwrap();
    let ring = |r: T, y: T, k: usize| {
        let phi = T::TAU() * T::from_usize(k).unwrap() / seg;
        Vec3::new(center.x + r * phi.cos(), y, center.z + r * phi.sin())
    };
    let uv = |r: T, y: T, k: usize| Vec2::new(T::TAU() * r * T::from_usize(k).unwrap() / seg, y);
    let eps = T::of(1e-9);
    for w in profile.windows(2) {
        let ((ra, ya), (rb, yb)) = (w[0], w[1]);
        for k in 0..segments {
            let (a0, a1) = (ring(ra, ya, k), ring(ra, ya, k + 1));
            let (b0, b1) = (ring(rb, yb, k), ring(rb, yb, k + 1));
            let (ua0, ua1) = (uv(ra, ya, k), uv(ra, ya, k + 1));
            let (ub0, ub1) = (uv(rb, yb, k), uv(rb, yb, k + 1));
            if ra > eps {
                m.push_outward([a0, a1, b0], [ua0, ua1, ub0], interior, class);
            }
            if rb > eps {
                m.push_outward([a1, b1, b0], [ua1, ub1, ub0], interior, class);
            }
        }
    }
    m
}

pub fn cylinder<T: Real>(radius: T, y0: T, y1: T, segments: usize, class: SemanticClass) -> Mesh<T> {
    let z = T::zero();
    lathe(&[(z, y0), (radius, y0), (radius, y1), (z, y1)], segments, Vec3::zero(), class)
}

pub fn cone<T: Real>(radius: T, y0: T, y1: T, segments: usize, class: SemanticClass) -> Mesh<T> {
    let z = T::zero();
    lathe(&[(z, y0), (radius, y0), (z, y1)], segments, Vec3::zero(), class)
}

/// Capsule standing on `y = 0` with total height `height`.
pub fn capsule<T: Real>(radius: T, height: T, segments: usize, rings: usize, class: SemanticClass) -> Mesh<T> {
    let mut profile = Vec::new();
    let body = (height - radius - radius).max(T::zero());
    let n = T::from_usize(rings).unwrap();
    for i in 0..=rings {
        let a = -T::FRAC_PI_2() + T::FRAC_PI_2() * T::from_usize(i).unwrap() / n;
        profile.push((radius * a.cos(), radius + radius * a.sin()));
    }
    for i in 0..=rings {
        let a = T::FRAC_PI_2() * T::from_usize(i).unwrap() / n;
        profile.push((radius * a.cos(), radius + body + radius * a.sin()));
    }
    profile[0].0 = T::zero();
    let last = profile.len() - 1;
    profile[last].0 = T::zero();
    profile.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    lathe(&profile, segments, Vec3::zero(), class)
}

/// UV sphere centered at `center`.
pub fn sphere<T: Real>(center: Vec3<T>, radius: T, segments: usize, rings: usize, class: SemanticClass) -> Mesh<T> {
    let n = T::from_usize(rings).unwrap();
    let profile: Vec<(T, T)> = (0..=rings)
        .map(|i| {
            let a = -T::FRAC_PI_2() + T::PI() * T::from_usize(i).unwrap() / n;
            let r = if i == 0 || i == rings { T::zero() } else { radius * a.cos() };
            (r, center.y + radius * a.sin())
        })
        .collect();
    lathe(&profile, segments, Vec3::new(center.x, T::zero(), center.z), class)
}

/// Reads the vertex/face subset of the Wavefront OBJ format. Faces with more
/// than three corners are fan-triangulated; texture and normal indices are
/// ignored. Every triangle gets `class`.
pub fn parse_obj<T: Real>(text: &str, class: SemanticClass) -> Result<Mesh<T>> {
    let mut verts: Vec<Vec3<T>> = Vec::new();
    let mut mesh = Mesh::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut it = raw.split('#').next().unwrap_or("").split_whitespace();
        match it.next() {
            Some("v") => {
                let mut c = [T::zero(); 3];
                for v in &mut c {
                    let s = it.next().ok_or_else(|| Error::parse("obj", line, "vertex needs 3 coordinates"))?;
                    *v = s.parse().map_err(|_| Error::parse("obj", line, format!("bad coordinate `{s}`")))?;
                }
                verts.push(Vec3::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let idx = it
                    .map(|tok| {
                        let head = tok.split('/').next().unwrap_or("");
                        let k: i64 = head
                            .parse()
                            .map_err(|_| Error::parse("obj", line, format!("bad face index `{tok}`")))?;
                        let resolved = if k < 0 { verts.len() as i64 + k } else { k - 1 };
                        if resolved < 0 || resolved >= verts.len() as i64 {
                            return Err(Error::parse("obj", line, format!("face index {k} out of range")));
                        }
                        Ok(resolved as usize)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if idx.len() < 3 {
                    return Err(Error::parse("obj", line, "face needs at least 3 vertices"));
                }
                for k in 1..idx.len() - 1 {
                    let tri = [idx[0], idx[k], idx[k + 1]];
                    let base = mesh.positions.len() as u32;
                    for &v in &tri {
                        let p = verts[v];
                        mesh.positions.push(p);
                        mesh.uvs.push(Vec2::new(p.x + p.z, p.y));
                    }
                    mesh.triangles.push([base, base + 1, base + 2]);
                    mesh.classes.push(class);
                }
            }
            _ => {}
        }
    }
    // Drop zero-area faces rather than fail the whole import.
    let keep: Vec<usize> = (0..mesh.triangles.len())
        .filter(|&t| mesh.triangle_area(t).as_f64() > MIN_TRIANGLE_AREA)
        .collect();
    if keep.len() != mesh.triangles.len() {
        let mut clean = Mesh::new();
        for t in keep {
            let tri = mesh.triangles[t];
            let base = clean.positions.len() as u32;
            for &v in &tri {
                clean.positions.push(mesh.positions[v as usize]);
                clean.uvs.push(mesh.uvs[v as usize]);
            }
            clean.triangles.push([base, base + 1, base + 2]);
            clean.classes.push(class);
        }
        mesh = clean;
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_outward_convex(m: &Mesh<f64>) {
        m.validate().unwrap();
        let n = m.positions.len() as f64;
        let centroid = m.positions.iter().fold(Vec3::zero(), |a, &p| a + p) / n;
        for t in 0..m.triangle_count() {
            let [a, b, c] = m.corners(t);
            let tc = (a + b + c) / 3.0;
            assert!(m.triangle_normal(t).dot(tc - centroid) > 0.0, "triangle {t} faces inward");
        }
    }

    #[test]
    fn primitives_are_valid_and_outward() {
        let class = SemanticClass::Building;
        assert_outward_convex(&cuboid(Vec3::new(-1.0, 0.0, -2.0), Vec3::new(1.0, 3.0, 2.0), class));
        assert_outward_convex(&cylinder(0.5, 0.0, 2.0, 12, class));
        assert_outward_convex(&cone(1.5, 1.0, 4.0, 10, class));
        assert_outward_convex(&capsule(0.3, 1.8, 8, 3, class));
        assert_outward_convex(&sphere(Vec3::new(0.0, 2.0, 0.0), 1.0, 24, 12, class));
        assert_eq!(cuboid(Vec3::zero(), Vec3::splat(1.0), class).triangle_count(), 12);
    }

    #[test]
    fn obj_import_triangulates_quads() {
        let text = "# square\nv 0 0 0\nv 1 0 0\nv 1 0 1\nv 0 0 1\nvt 0 0\nf 1/1 2/1 3/1 4/1\nf -4 -3 -3\n";
        let m: Mesh<f64> = parse_obj(text, SemanticClass::Void).unwrap();
        // The degenerate second face is skipped.
        assert_eq!(m.triangle_count(), 2);
        assert!(m.classes.iter().all(|&c| c == SemanticClass::Void));
        m.validate().unwrap();
        assert!(parse_obj::<f64>("v 0 0\n", SemanticClass::Void).is_err());
        assert!(parse_obj::<f64>("v 0 0 0\nf 1 2 3\n", SemanticClass::Void).is_err());
    }
}
