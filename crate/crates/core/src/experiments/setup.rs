use rand::Rng;

use crate::assets::{instantiate_scene_geometry, AssetCatalog};
use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::probe::{LabeledImage, RgbImage};
use crate::eval::LabelMap;
use crate::real::Real;
use crate::render::{render, Camera, Framebuffer, GroundtruthBundle, Lighting, Medium, Ray, World};
use crate::rng::{scene_stream, Stage};
use crate::scene::{sample_scene, RoadNetwork, SceneState};

use super::config::{Fidelity, GenerationConfig};

/// Camera candidates tried before settling for the roomiest one.
const CAMERA_ATTEMPTS: usize = 64;

/// A sampled scene ready to render.
pub struct FrameSetup<T> {
    pub scene: SceneState<T>,
    pub world: World<T>,
    pub camera: Camera<T>,
    pub lighting: Lighting<T>,
    pub medium: Medium<T>,
    pub max_bounces: u32,
}

/// Road cells in a straight line from `(c, r)` along `(dc, dr)`.
fn run_length<T: Real>(roads: &RoadNetwork<T>, c: usize, r: usize, dc: i32, dr: i32) -> usize {
    let (mut c, mut r, mut n) = (c as i64, r as i64, 0);
    loop {
        c += i64::from(dc);
        r += i64::from(dr);
        let inside = c >= 0 && r >= 0 && (c as usize) < roads.cols() && (r as usize) < roads.rows();
        if !inside || !roads.is_road(c as usize, r as usize) {
            return n;
        }
        n += 1;
    }
}

/// Street-level camera on a road cell with nothing overhead, looking down the
/// longest straight stretch of road whose first `clearance` meters are
/// unobstructed.
///
/// Up to `CAMERA_ATTEMPTS` road cells are drawn and the first acceptable one
/// is used. When none is acceptable the camera takes the candidate with the
/// longest unobstructed view.
pub fn place_camera<T: Real>(scene: &SceneState<T>, world: &World<T>, cfg: &GenerationConfig) -> Result<Camera<T>> {
    let roads = &scene.roads;
    if roads.road_cell_count() == 0 {
        return Err(Error::Camera("the scene has no road cell to stand on".into()));
    }
    let mut rng = scene_stream(scene.seed, Stage::CameraPlacement);
    let eye = T::of(cfg.camera.eye_height);
    let clearance = T::of(cfg.camera.clearance);
    let dirs: [(i32, i32); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

    let mut chosen = None;
    let mut fallback: Option<(Vec3<T>, Vec3<T>, T)> = None;
    for _ in 0..CAMERA_ATTEMPTS {
        let (c, r) = roads.sample_cell(&mut rng);
        let g = roads.cell_center(c, r);
        let position = Vec3::new(g.x, eye, g.y);
        let first = rng.random_range(0..dirs.len());
        if world.intersect(&Ray::new(position, Vec3::unit_y())).is_some() {
            continue;
        }
        let mut pick: Option<(Vec3<T>, usize)> = None;
        for k in 0..dirs.len() {
            let (dc, dr) = dirs[(first + k) % dirs.len()];
            let heading = Vec3::new(T::from_i32(dc).unwrap(), T::zero(), T::from_i32(dr).unwrap());
            let view = cfg.view_direction(heading);
            let free = world.intersect(&Ray::new(position, view)).map_or(T::infinity(), |hit| hit.t);
            if fallback.is_none_or(|(_, _, f)| free > f) {
                fallback = Some((position, view, free));
            }
            let run = run_length(roads, c, r, dc, dr);
            if free >= clearance && pick.is_none_or(|(_, best)| run > best) {
                pick = Some((view, run));
            }
        }
        if let Some((view, _)) = pick {
            chosen = Some((position, view));
            break;
        }
    }
    let (position, view) = chosen
        .or(fallback.map(|(p, v, _)| (p, v)))
        .ok_or_else(|| Error::Camera("every sampled road cell is covered by an object".into()))?;
    let camera = Camera {
        position,
        look_at: position + view,
        vertical_fov: T::of(cfg.camera.vertical_fov_deg.to_radians()),
        width: cfg.camera.width,
        height: cfg.camera.height,
    };
    camera.validate()?;
    Ok(camera)
}

impl<T: Real> FrameSetup<T> {
    /// Samples the scene for `scene_seed` and builds its geometry, camera,
    /// lighting and medium.
    pub fn new(cfg: &GenerationConfig, scene_seed: u64) -> Result<Self> {
        cfg.validate()?;
        let scene_cfg = cfg.scene.to_config::<T>()?;
        let roads = scene_cfg.road_network()?;
        let scene = sample_scene(&scene_cfg, &roads, scene_seed)?;
        let catalog = AssetCatalog::procedural(cfg.scene.asset_counts()?, &cfg.style_of());
        let world = World::new(&instantiate_scene_geometry(&scene, &catalog)?);
        let camera = place_camera(&scene, &world, cfg)?;
        Ok(Self {
            scene,
            world,
            camera,
            lighting: cfg.lighting_of(),
            medium: cfg.medium_of(),
            max_bounces: cfg.dataset.max_bounces,
        })
    }

    /// Renders at `fidelity`; the render seed is the scene seed so every
    /// fidelity of a scene shares its random streams.
    pub fn render(&self, fidelity: Fidelity) -> Result<(Framebuffer<T>, GroundtruthBundle<T>)> {
        let rc = fidelity.render_config(self.scene.seed, self.max_bounces);
        render(&self.world, &self.camera, &self.lighting, &self.medium, &rc)
    }

    /// Display image and labels at `fidelity`.
    pub fn labeled_image(&self, fidelity: Fidelity) -> Result<LabeledImage> {
        let (fb, gt) = self.render(fidelity)?;
        to_labeled(&fb, &gt)
    }
}

pub fn to_labeled<T: Real>(fb: &Framebuffer<T>, gt: &GroundtruthBundle<T>) -> Result<LabeledImage> {
    LabeledImage::new(
        RgbImage::new(fb.width, fb.height, fb.display.clone())?,
        LabelMap::new(gt.width, gt.height, gt.label_ids())?,
    )
}

/// Renders scenes `seeds` at each fidelity in memory. The result is indexed
/// `[fidelity][scene]`; every scene is sampled once and shared by all
/// fidelities.
pub fn render_sets(cfg: &GenerationConfig, seeds: &[u64], fidelities: &[Fidelity]) -> Result<Vec<Vec<LabeledImage>>> {
    let mut out: Vec<Vec<LabeledImage>> = vec![Vec::with_capacity(seeds.len()); fidelities.len()];
    for &seed in seeds {
        let setup = FrameSetup::<f64>::new(cfg, seed)?;
        for (i, &f) in fidelities.iter().enumerate() {
            out[i].push(setup.labeled_image(f)?);
        }
    }
    Ok(out)
}

/// Scene seeds `base .. base + n`.
pub fn seed_range(base: u64, n: u32) -> Vec<u64> {
    (0..u64::from(n)).map(|i| base + i).collect()
}

