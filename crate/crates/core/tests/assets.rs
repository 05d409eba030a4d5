//! Geometry checks of procedural assets and scene instantiation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use urbansim::assets::{instantiate_scene_geometry, parse_obj, AssetCatalog, AssetStyle, Material};
use urbansim::labels::{SemanticClass, NUM_CLASSES};
use urbansim::math::{Rgb, Vec2, Vec3};
use urbansim::scene::{sample_scene, Category, Mark, Region, RoadNetwork, SceneFile, SceneObject, SceneState, DropCounts};

fn empty_scene() -> SceneState<f64> {
    let region = Region::new(Vec2::new(0.0, 0.0), Vec2::new(40.0, 40.0)).unwrap();
    let roads = RoadNetwork::from_grid(Vec2::new(0.0, 0.0), 20.0, 2, 2, vec![false, false, false, true]).unwrap();
    SceneState {
        static_objects: Vec::new(),
        dynamic_objects: Vec::new(),
        region,
        roads,
        seed: 0,
        dropped: DropCounts::default(),
    }
}

fn distinct(points: impl Iterator<Item = Vec3<f64>>) -> Vec<Vec3<f64>> {
    let mut out: Vec<Vec3<f64>> = Vec::new();
    for p in points {
        if !out.iter().any(|q| (*q - p).length() < 1e-9) {
            out.push(p);
        }
    }
    out
}

#[test]
fn quarter_turn_rotates_the_building_footprint() {
    let catalog = AssetCatalog::procedural([1, 1, 1, 1], &AssetStyle::default());
    let (base, _) = catalog.get(Category::Building, 0).unwrap();
    let local = distinct(base.positions.iter().copied().filter(|p| p.y == 0.0));
    assert_eq!(local.len(), 4);

    let p = Vec2::new(13.0, 21.0);
    let mut scene = empty_scene();
    let mark = Mark {
        category: Category::Building,
        asset_index: 0,
        scale: 1.0,
        orientation: std::f64::consts::FRAC_PI_2,
    };
    scene.static_objects.push(SceneObject::fixed(p, mark));
    let g = instantiate_scene_geometry(&scene, &catalog).unwrap();
    let mesh = &g.mesh;
    let world = distinct(
        (0..mesh.triangle_count())
            .filter(|&t| mesh.classes[t] == SemanticClass::Building)
            .flat_map(|t| mesh.corners(t))
            .filter(|v| v.y.abs() < 1e-12),
    );
    assert_eq!(world.len(), 4);
    // A quarter turn about +y maps local (x, z) to (-z, x).
    for c in &local {
        let want = Vec3::new(p.x - c.z, 0.0, p.y + c.x);
        assert!(world.iter().any(|w| (*w - want).length() < 1e-9), "missing corner {want:?}");
    }
}

#[test]
fn placement_is_an_isometry() {
    let catalog = AssetCatalog::procedural([2, 2, 2, 2], &AssetStyle::default());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for c in Category::ALL {
        let (mesh, _) = catalog.get(c, 1).unwrap();
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let offset = Vec3::new(rng.random_range(-50.0..50.0), 0.0, rng.random_range(-50.0..50.0));
        let moved = mesh.transformed(angle, offset);
        let n = mesh.positions.len();
        for _ in 0..500 {
            let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
            let before = (mesh.positions[i] - mesh.positions[j]).length();
            let after = (moved.positions[i] - moved.positions[j]).length();
            assert!((before - after).abs() < 1e-9);
        }
    }
}

#[test]
fn scene_triangles_use_palette_classes_only() {
    let file = SceneFile::default();
    let cfg = file.to_config::<f64>().unwrap();
    let roads = cfg.road_network().unwrap();
    let scene = sample_scene(&cfg, &roads, 4).unwrap();
    let catalog = AssetCatalog::procedural(file.asset_counts().unwrap(), &AssetStyle::default());
    let g = instantiate_scene_geometry(&scene, &catalog).unwrap();
    g.mesh.validate().unwrap();
    let mut counts = [0usize; NUM_CLASSES];
    for c in &g.mesh.classes {
        counts[c.id() as usize] += 1;
    }
    assert_eq!(counts.iter().sum::<usize>(), g.mesh.triangle_count());
    assert_eq!(counts[SemanticClass::Sky.id() as usize], 0);
    assert_eq!(counts[SemanticClass::Void.id() as usize], 0);
    assert!(counts[SemanticClass::Building.id() as usize] > 0);
    assert!(counts[SemanticClass::Ground.id() as usize] > 0);
    assert_eq!(g.material_ids.len(), g.mesh.triangle_count());
    assert!(g.material_ids.iter().all(|&m| (m as usize) < g.materials.len()));
}

#[test]
fn imported_meshes_join_the_catalog() {
    let obj = "v 0 0 0\nv 1 0 0\nv 1 2 0\nv 0 2 0\nf 1 2 3 4\n";
    let mesh = parse_obj::<f64>(obj, SemanticClass::Vehicle).unwrap();
    assert_eq!(mesh.triangle_count(), 2);
    let mut catalog = AssetCatalog::procedural([1, 1, 1, 1], &AssetStyle::default());
    let idx = catalog
        .add(Category::Vehicle, mesh, Material::diffuse(Rgb::new(0.2, 0.3, 0.4)))
        .unwrap();
    assert_eq!(idx, 1);
    assert_eq!(catalog.count(Category::Vehicle), 2);
    assert!(catalog.add(Category::Vehicle, parse_obj("v 0 0 0\n", SemanticClass::Vehicle).unwrap(), Material::diffuse(Rgb::splat(2.0))).is_err());
    assert!("bus".parse::<Category>().is_err());
    assert!(catalog.get(Category::Tree, 5).is_err());
}
