//! Procedural stand-ins for downloaded CAD assets, and placement of a sampled
//! scene into world-space geometry.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::labels::SemanticClass;
use crate::math::{Rgb, Vec2, Vec3};
use crate::real::Real;
use crate::rng::asset_stream;
use crate::scene::{Category, SceneState};

use super::material::{BinaryMask, Material, Texture};
use super::mesh::{capsule, cone, cuboid, cylinder, Mesh};

/// Road surfaces sit this far above the ground plane, meters.
pub const ROAD_HEIGHT: f64 = 0.02;

/// The ground plane extends past the region by this multiple of the larger
/// region side on every edge, so street-level views meet ground at the
/// horizon.
pub const GROUND_MARGIN: f64 = 4.0;

/// Appearance knobs of a catalog. Two catalogs built with different styles
/// share geometry but differ in color and texture statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct AssetStyle<T> {
    /// Multiplies every object albedo (clamped to 1).
    pub tint: Rgb<T>,
    /// Scales the depth of texture modulation; 1 is the reference look.
    pub texture_contrast: T,
    pub ground_albedo: Rgb<T>,
    pub road_albedo: Rgb<T>,
}

impl<T: Real> Default for AssetStyle<T> {
    fn default() -> Self {
        Self {
            tint: Rgb::splat(T::one()),
            texture_contrast: T::one(),
            ground_albedo: Rgb::new(T::of(0.30), T::of(0.34), T::of(0.22)),
            road_albedo: Rgb::new(T::of(0.16), T::of(0.16), T::of(0.17)),
        }
    }
}

fn rgb<T: Real>(c: [f64; 3]) -> Rgb<T> {
    Rgb::new(T::of(c[0]), T::of(c[1]), T::of(c[2]))
}

fn pick<'a, R: Rng>(rng: &mut R, items: &'a [[f64; 3]]) -> &'a [f64; 3] {
    &items[rng.random_range(0..items.len())]
}

const FACADES: [[f64; 3]; 5] = [
    [0.55, 0.52, 0.48],
    [0.62, 0.35, 0.28],
    [0.72, 0.68, 0.58],
    [0.45, 0.47, 0.52],
    [0.80, 0.78, 0.72],
];
const PAINTS: [[f64; 3]; 5] = [
    [0.60, 0.05, 0.05],
    [0.05, 0.10, 0.50],
    [0.85, 0.85, 0.85],
    [0.04, 0.04, 0.04],
    [0.50, 0.50, 0.52],
];
const CLOTHES: [[f64; 3]; 4] = [
    [0.20, 0.20, 0.30],
    [0.50, 0.30, 0.20],
    [0.10, 0.10, 0.10],
    [0.60, 0.55, 0.45],
];

/// Deterministic mesh and material for `(category, asset_index)`, uniformly
/// scaled by `scale`. Local frame: base centered at the origin on `y = 0`.
pub fn build_asset<T: Real>(category: Category, asset_index: u32, scale: T, style: &AssetStyle<T>) -> (Mesh<T>, Material<T>) {
    let mut rng = asset_stream(category.index() as u8, asset_index);
    let mut u = |lo: f64, hi: f64| T::of(lo + (hi - lo) * rng.random::<f64>());
    let class = category.semantic_class();
    let contrast = style.texture_contrast;
    let (mesh, mut material) = match category {
        Category::Building => {
            let (w, d, h) = (u(8.0, 16.0), u(8.0, 16.0), u(10.0, 32.0));
            let half = T::of(0.5);
            let mut mesh = cuboid(Vec3::new(-w * half, T::zero(), -d * half), Vec3::new(w * half, h, d * half), class);
            if asset_index % 2 == 1 {
                // Setback storey.
                let (tw, td, th) = (w * T::of(0.3), d * T::of(0.3), u(2.0, 6.0));
                mesh.append(&cuboid(Vec3::new(-tw, h, -td), Vec3::new(tw, h + th, td), class));
            }
            let mut r = asset_stream(category.index() as u8, asset_index ^ 0x8000_0000);
            let base = *pick(&mut r, &FACADES);
            // Window grid: 3 m floors, 2.5 m bays, window occupies the middle texels.
            let bits = (0..6 * 5).map(|i| (1..5).contains(&(i % 5)) && (2..5).contains(&(i / 5))).collect();
            let mask = BinaryMask::new(5, 6, T::of(0.5), bits).expect("static mask shape");
            let texture = if asset_index.is_multiple_of(3) {
                Texture::Stripes {
                    period: T::of(3.0),
                    duty: T::of(0.15),
                    dark: T::one() - T::of(0.35) * contrast,
                    along_v: true,
                }
            } else {
                Texture::Noise {
                    scale: T::of(0.8),
                    amplitude: T::of(0.25) * contrast,
                    seed: asset_index as u64,
                }
            };
            let mat = Material {
                diffuse_albedo: rgb(base),
                specular_coefficient: T::of(0.6),
                roughness: T::of(0.25),
                specular_mask: Some(mask),
                texture: Some(texture),
            };
            (mesh, mat)
        }
        Category::Tree => {
            let trunk_r = u(0.18, 0.32);
            let trunk_h = u(1.8, 2.8);
            let crown_r = u(1.4, 2.4);
            let crown_h = u(3.0, 6.0);
            let mut mesh = cylinder(trunk_r, T::zero(), trunk_h, 8, class);
            let base = trunk_h - T::of(0.4);
            mesh.append(&cone(crown_r, base, base + crown_h, 12, class));
            let green = [u(0.12, 0.22).as_f64(), u(0.30, 0.45).as_f64(), u(0.08, 0.16).as_f64()];
            let mat = Material {
                diffuse_albedo: rgb(green),
                specular_coefficient: T::zero(),
                roughness: T::one(),
                specular_mask: None,
                texture: Some(Texture::Noise {
                    scale: T::of(0.3),
                    amplitude: T::of(0.4) * contrast,
                    seed: 1000 + asset_index as u64,
                }),
            };
            (mesh, mat)
        }
        Category::Vehicle => {
            let (l, w) = (u(3.8, 4.8), u(1.7, 2.0));
            let body_h = u(0.8, 1.0);
            let cabin_h = u(0.55, 0.8);
            let half = T::of(0.5);
            let clearance = T::of(0.25);
            let mut mesh = cuboid(
                Vec3::new(-l * half, clearance, -w * half),
                Vec3::new(l * half, clearance + body_h, w * half),
                class,
            );
            let cl = l * T::of(0.28);
            let cw = w * T::of(0.45);
            mesh.append(&cuboid(
                Vec3::new(-cl, clearance + body_h, -cw),
                Vec3::new(cl, clearance + body_h + cabin_h, cw),
                class,
            ));
            let mut r = asset_stream(category.index() as u8, asset_index ^ 0x8000_0000);
            let mat = Material {
                diffuse_albedo: rgb(*pick(&mut r, &PAINTS)),
                specular_coefficient: T::of(0.8),
                roughness: T::of(0.15),
                specular_mask: None,
                texture: None,
            };
            (mesh, mat)
        }
        Category::Pedestrian => {
            let h = u(1.55, 1.9);
            let r = u(0.2, 0.28);
            let mesh = capsule(r, h, 8, 3, class);
            let mut rr = asset_stream(category.index() as u8, asset_index ^ 0x8000_0000);
            let mat = Material {
                diffuse_albedo: rgb(*pick(&mut rr, &CLOTHES)),
                specular_coefficient: T::zero(),
                roughness: T::one(),
                specular_mask: None,
                texture: Some(Texture::Stripes {
                    period: T::of(0.9),
                    duty: T::of(0.5),
                    dark: T::one() - T::of(0.3) * contrast,
                    along_v: true,
                }),
            };
            (mesh, mat)
        }
    };
    material.diffuse_albedo = (material.diffuse_albedo * style.tint).map(|c| c.min(T::one()));
    (mesh.scaled(scale), material)
}

/// Base (scale 1) assets per category.
#[derive(Clone, Debug)]
pub struct AssetCatalog<T> {
    entries: [Vec<(Mesh<T>, Material<T>)>; 4],
    pub ground: Material<T>,
    pub road: Material<T>,
}

impl<T: Real> AssetCatalog<T> {
    pub fn procedural(counts: [u32; 4], style: &AssetStyle<T>) -> Self {
        let entries = Category::ALL.map(|c| {
            (0..counts[c.index()])
                .map(|i| build_asset(c, i, T::one(), style))
                .collect()
        });
        let ground = Material {
            diffuse_albedo: style.ground_albedo,
            specular_coefficient: T::zero(),
            roughness: T::one(),
            specular_mask: None,
            texture: Some(Texture::Noise {
                scale: T::of(1.5),
                amplitude: T::of(0.3) * style.texture_contrast,
                seed: 7,
            }),
        };
        let road = Material {
            diffuse_albedo: style.road_albedo,
            specular_coefficient: T::of(0.1),
            roughness: T::of(0.6),
            specular_mask: None,
            texture: Some(Texture::Checker {
                size: T::of(4.0),
                dark: T::one() - T::of(0.1) * style.texture_contrast,
            }),
        };
        Self { entries, ground, road }
    }

    pub fn count(&self, category: Category) -> u32 {
        self.entries[category.index()].len() as u32
    }

    pub fn counts(&self) -> [u32; 4] {
        Category::ALL.map(|c| self.count(c))
    }

    /// Appends an externally supplied asset; returns its index.
    pub fn add(&mut self, category: Category, mesh: Mesh<T>, material: Material<T>) -> Result<u32> {
        mesh.validate()?;
        material.validate()?;
        let list = &mut self.entries[category.index()];
        list.push((mesh, material));
        Ok(list.len() as u32 - 1)
    }

    pub fn get(&self, category: Category, asset_index: u32) -> Result<&(Mesh<T>, Material<T>)> {
        let list = &self.entries[category.index()];
        list.get(asset_index as usize).ok_or(Error::AssetIndex {
            category: category.name(),
            index: asset_index,
            count: list.len() as u32,
        })
    }
}

/// Flattened world-space triangles with per-triangle class and material.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometrySet<T> {
    pub mesh: Mesh<T>,
    pub material_ids: Vec<u32>,
    pub materials: Vec<Material<T>>,
}

impl<T: Real> Default for GeometrySet<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> GeometrySet<T> {
    pub fn new() -> Self {
        Self {
            mesh: Mesh::new(),
            material_ids: Vec::new(),
            materials: Vec::new(),
        }
    }

    pub fn add_material(&mut self, m: Material<T>) -> u32 {
        self.materials.push(m);
        self.materials.len() as u32 - 1
    }

    pub fn add_mesh(&mut self, mesh: &Mesh<T>, material: u32) {
        self.mesh.append(mesh);
        self.material_ids
            .extend(std::iter::repeat_n(material, mesh.triangle_count()));
    }
}

fn flat_quad<T: Real>(x0: T, z0: T, x1: T, z1: T, y: T, class: SemanticClass) -> Mesh<T> {
    let up = Vec3::new(T::zero(), y - T::one(), T::zero());
    let c = [
        Vec3::new(x0, y, z0),
        Vec3::new(x1, y, z0),
        Vec3::new(x1, y, z1),
        Vec3::new(x0, y, z1),
    ];
    let uv = c.map(|p| Vec2::new(p.x, p.z));
    let mut m = Mesh::new();
    m.push_outward([c[0], c[1], c[2]], [uv[0], uv[1], uv[2]], up, class);
    m.push_outward([c[0], c[2], c[3]], [uv[0], uv[2], uv[3]], up, class);
    m
}

/// Ground plane, road strips and one yawed, scaled, translated instance per
/// scene object.
pub fn instantiate_scene_geometry<T: Real>(scene: &SceneState<T>, catalog: &AssetCatalog<T>) -> Result<GeometrySet<T>> {
    let mut out = GeometrySet::new();
    let ground_id = out.add_material(catalog.ground.clone());
    let road_id = out.add_material(catalog.road.clone());

    let (lo, hi) = (scene.region.min(), scene.region.max());
    let pad = scene.region.width().max(scene.region.depth()) * T::of(GROUND_MARGIN);
    let ground = flat_quad(lo.x - pad, lo.y - pad, hi.x + pad, hi.y + pad, T::zero(), SemanticClass::Ground);
    out.add_mesh(&ground, ground_id);

    let roads = &scene.roads;
    let (o, cs) = (roads.origin(), roads.cell_size());
    let road_y = T::of(ROAD_HEIGHT);
    for r in 0..roads.rows() {
        let mut c = 0;
        while c < roads.cols() {
            if !roads.is_road(c, r) {
                c += 1;
                continue;
            }
            let start = c;
            while c < roads.cols() && roads.is_road(c, r) {
                c += 1;
            }
            let f = |k: usize| T::from_usize(k).unwrap() * cs;
            let quad = flat_quad(o.x + f(start), o.y + f(r), o.x + f(c), o.y + f(r + 1), road_y, SemanticClass::Ground);
            out.add_mesh(&quad, road_id);
        }
    }

    let mut material_of: BTreeMap<(Category, u32), u32> = BTreeMap::new();
    for (i, obj) in scene.objects().enumerate() {
        let m = &obj.mark;
        let (mesh, material) = catalog.get(m.category, m.asset_index).map_err(|e| Error::UnresolvedMark {
            object: i,
            reason: e.to_string(),
        })?;
        let id = *material_of
            .entry((m.category, m.asset_index))
            .or_insert_with(|| {
                out.materials.push(material.clone());
                out.materials.len() as u32 - 1
            });
        let placed = mesh
            .scaled(m.scale)
            .transformed(m.orientation, obj.position.to_world(T::zero()));
        out.add_mesh(&placed, id);
    }
    Ok(out)
}
