//! Renderer checks against closed forms and brute-force oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use urbansim::assets::{cuboid, sphere, BinaryMask, GeometrySet, Material, Mesh};
use urbansim::experiments::{Fidelity, FrameSetup, GenerationConfig};
use urbansim::labels::SemanticClass;
use urbansim::math::{Rgb, Vec2, Vec3};
use urbansim::render::{
    fresnel_schlick, render, shade_cook_torrance, shade_lambertian, trace_path, Camera, Hit, Lighting, Medium, Ray,
    RenderConfig, ShadingMode, SunLight, World,
};
use urbansim::rng::pixel_stream;

fn plane(half: f64, y: f64) -> Mesh<f64> {
    let c = [
        Vec3::new(-half, y, -half),
        Vec3::new(half, y, -half),
        Vec3::new(half, y, half),
        Vec3::new(-half, y, half),
    ];
    let uv = c.map(|p| Vec2::new(p.x, p.z));
    let below = Vec3::new(0.0, y - 1.0, 0.0);
    let mut m = Mesh::new();
    m.push_outward([c[0], c[1], c[2]], [uv[0], uv[1], uv[2]], below, SemanticClass::Ground);
    m.push_outward([c[0], c[2], c[3]], [uv[0], uv[2], uv[3]], below, SemanticClass::Ground);
    m
}

fn world_of(parts: &[(Mesh<f64>, Material<f64>)]) -> World<f64> {
    let mut g = GeometrySet::new();
    for (mesh, mat) in parts {
        let id = g.add_material(mat.clone());
        g.add_mesh(mesh, id);
    }
    World::new(&g)
}

fn sun(dir: Vec3<f64>, e: f64) -> SunLight<f64> {
    SunLight::new(dir, Rgb::splat(e))
}

fn dark_sky(sun: SunLight<f64>) -> Lighting<f64> {
    Lighting { sun, sky: Rgb::black() }
}

#[test]
fn ray_hits_plane_at_analytic_distance() {
    let w = world_of(&[(plane(100.0, 0.0), Material::diffuse(Rgb::splat(0.5)))]);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let o = Vec3::new(rng.random_range(-5.0..5.0), rng.random_range(0.5..9.0), rng.random_range(-5.0..5.0));
        let d = Vec3::new(rng.random_range(-0.5..0.5), -1.0, rng.random_range(-0.5..0.5)).normalized();
        let hit = w.intersect(&Ray::new(o, d)).expect("plane below");
        assert!((hit.t - o.y / -d.y).abs() < 1e-9);
        assert!((hit.normal - Vec3::unit_y()).length() < 1e-12);
        assert_eq!(hit.class, SemanticClass::Ground);
    }
    assert!(w.intersect(&Ray::new(Vec3::new(0.0, 1.0, 0.0), Vec3::unit_y())).is_none());
}

fn brute_force(w: &World<f64>, ray: &Ray<f64>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for i in 0..w.triangle_count() {
        let ([a, b, c], _, _) = w.triangle(i);
        let (e1, e2) = (b - a, c - a);
        let p = ray.dir.cross(e2);
        let det = e1.dot(p);
        if det.abs() < 1e-14 {
            continue;
        }
        let s = ray.origin - a;
        let u = s.dot(p) / det;
        let q = s.cross(e1);
        let v = ray.dir.dot(q) / det;
        let t = e2.dot(q) / det;
        if u < 0.0 || v < 0.0 || u + v > 1.0 || t <= 1e-7 {
            continue;
        }
        if best.is_none_or(|(_, bt)| t < bt) {
            best = Some((i, t));
        }
    }
    best
}

fn rand_vec(rng: &mut ChaCha8Rng, h: f64) -> Vec3<f64> {
    Vec3::new(rng.random_range(-h..h), rng.random_range(-h..h), rng.random_range(-h..h))
}

#[test]
fn bvh_agrees_with_brute_force_on_random_rays() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut mesh = Mesh::new();
    for _ in 0..400 {
        let a = rand_vec(&mut rng, 10.0);
        let b = a + rand_vec(&mut rng, 2.0);
        let c = a + rand_vec(&mut rng, 2.0);
        let uv = [Vec2::new(0.0, 0.0); 3];
        mesh.push_outward([a, b, c], uv, a - (b - a).cross(c - a), SemanticClass::Building);
    }
    let w = world_of(&[(mesh, Material::diffuse(Rgb::splat(0.5)))]);
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut hits = 0;
    for _ in 0..1000 {
        let o = Vec3::new(rng.random_range(-15.0..15.0), rng.random_range(-15.0..15.0), rng.random_range(-15.0..15.0));
        let d = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)).normalized();
        let ray = Ray::new(o, d);
        let want = brute_force(&w, &ray);
        let got = w.intersect(&ray);
        match (want, got) {
            (None, None) => {}
            (Some((i, t)), Some(h)) => {
                hits += 1;
                assert_eq!(h.triangle as usize, i);
                assert!((h.t - t).abs() < 1e-9);
            }
            (w, g) => panic!("mismatch: oracle {w:?}, bvh {:?}", g.map(|h| h.t)),
        }
        assert_eq!(w.occluded(&ray, f64::INFINITY), want.is_some());
    }
    assert!(hits > 100);
}

fn hit_with(material: &Material<f64>, normal: Vec3<f64>) -> Hit<'_, f64> {
    Hit {
        t: 1.0,
        point: Vec3::zero(),
        normal,
        uv: Vec2::new(0.25, 0.25),
        class: SemanticClass::Building,
        material,
        triangle: 0,
    }
}

#[test]
fn lambertian_closed_form() {
    let white = Material::diffuse(Rgb::splat(1.0));
    let pi = std::f64::consts::PI;
    let s = sun(Vec3::new(0.0, -1.0, 0.0), pi);
    let up = hit_with(&white, Vec3::unit_y());
    let c = shade_lambertian(&up, &s);
    for v in c.channels() {
        assert!((v - 1.0).abs() < 1e-15);
    }
    let side = hit_with(&white, Vec3::new(1.0, 0.0, 0.0));
    assert_eq!(shade_lambertian(&side, &s), Rgb::black());
    let tilted = hit_with(&white, Vec3::new(0.6, 0.8, 0.0));
    let a = shade_lambertian(&tilted, &s);
    let b = shade_lambertian(&tilted, &sun(Vec3::new(0.0, -1.0, 0.0), 2.0 * pi));
    assert!((b.r - 2.0 * a.r).abs() < 1e-15);
    assert!((a.r - 0.8).abs() < 1e-15);
}

#[test]
fn cook_torrance_reduces_to_lambertian_without_specular() {
    let s = sun(Vec3::new(0.3, -1.0, 0.2), 3.0);
    let view = Vec3::new(-0.3, 1.0, 0.1).normalized();
    let n = Vec3::new(0.1, 1.0, 0.0).normalized();
    let mut m = Material::diffuse(Rgb::new(0.4, 0.5, 0.6));
    m.roughness = 0.3;
    assert_eq!(shade_cook_torrance(&hit_with(&m, n), &s, view), shade_lambertian(&hit_with(&m, n), &s));
    m.specular_coefficient = 0.8;
    m.specular_mask = Some(BinaryMask::uniform(false));
    assert_eq!(shade_cook_torrance(&hit_with(&m, n), &s, view), shade_lambertian(&hit_with(&m, n), &s));
    m.specular_mask = Some(BinaryMask::uniform(true));
    let spec = shade_cook_torrance(&hit_with(&m, n), &s, view);
    assert!(spec.r > shade_lambertian(&hit_with(&m, n), &s).r);
    assert_eq!(fresnel_schlick(0.04, 0.0), 1.0);
}

#[test]
fn isotropic_phase_sampling_fills_octants_evenly() {
    let fog = Medium {
        scattering: 0.1,
        absorption: 0.0,
        anisotropy: 0.0,
        enabled: true,
        ceiling: 10.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 80_000;
    let mut bins = [0u64; 8];
    let incoming = Vec3::new(0.3, -0.5, 0.8).normalized();
    for _ in 0..n {
        let d = fog.sample_phase(incoming, rng.random::<f64>(), rng.random::<f64>());
        assert!((d.length() - 1.0).abs() < 1e-12);
        let k = (d.x > 0.0) as usize | ((d.y > 0.0) as usize) << 1 | ((d.z > 0.0) as usize) << 2;
        bins[k] += 1;
    }
    let e = n as f64 / 8.0;
    let chi: f64 = bins.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
    // Upper 0.1% point of chi-square with 7 degrees of freedom.
    assert!(chi < 24.322, "chi-square {chi}");
}

fn camera_at(position: Vec3<f64>, look_at: Vec3<f64>, w: usize, h: usize) -> Camera<f64> {
    Camera {
        position,
        look_at,
        vertical_fov: 0.9,
        width: w,
        height: h,
    }
}

fn mean_and_sem(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn single_bounce_path_tracing_matches_direct_lighting() {
    let rho = 0.6;
    let w = world_of(&[(plane(100.0, 0.0), Material::diffuse(Rgb::splat(rho)))]);
    let s = sun(Vec3::new(0.5, -1.0, 0.3), 2.5);
    let lighting = dark_sky(s);
    let ray = Ray::new(Vec3::new(0.0, 3.0, 0.0), Vec3::new(0.2, -1.0, 0.4).normalized());
    let expected = rho / std::f64::consts::PI * 2.5 * s.to_sun().y;
    let mut rng = pixel_stream(9, 0);
    let xs: Vec<f64> = (0..256)
        .map(|_| trace_path(&w, &Medium::disabled(), &lighting, ray, 1, &mut rng).g)
        .collect();
    let (mean, sem) = mean_and_sem(&xs);
    assert!((mean - expected).abs() <= 3.0 * sem + 1e-6 * expected, "{mean} vs {expected}");
    let hit = w.intersect(&ray).unwrap();
    assert!((shade_lambertian(&hit, &s).g - expected).abs() < 1e-12);
}

#[test]
fn occluded_points_get_no_sun_in_path_tracing_only() {
    let floor = (plane(100.0, 0.0), Material::diffuse(Rgb::splat(0.5)));
    let roof = (
        cuboid(Vec3::new(-2.0, 3.0, -2.0), Vec3::new(2.0, 3.5, 2.0), SemanticClass::Building),
        Material::diffuse(Rgb::splat(0.5)),
    );
    let w = world_of(&[floor, roof]);
    let lighting = dark_sky(sun(Vec3::new(0.0, -1.0, 0.0), 3.0));
    // From the side, under the roof.
    let ray = Ray::new(Vec3::new(-6.0, 1.0, 0.0), Vec3::new(6.0, -1.0, 0.0).normalized());
    let hit = w.intersect(&ray).unwrap();
    assert_eq!(hit.class, SemanticClass::Ground);
    assert!(shade_lambertian(&hit, &lighting.sun).r > 0.0);
    let mut rng = pixel_stream(1, 1);
    for _ in 0..32 {
        assert_eq!(trace_path(&w, &Medium::disabled(), &lighting, ray, 1, &mut rng), Rgb::black());
    }
}

#[test]
fn absorbing_medium_scales_direct_light_by_transmittance() {
    let rho = 0.5;
    let w = world_of(&[(plane(100.0, 0.0), Material::diffuse(Rgb::splat(rho)))]);
    let elevation = 60f64.to_radians();
    let s = SunLight::from_angles(elevation, 0.3, Rgb::splat(4.0));
    let lighting = dark_sky(s);
    let fog = Medium {
        scattering: 0.0,
        absorption: 0.05,
        anisotropy: 0.0,
        enabled: true,
        ceiling: 10.0,
    };
    let origin = Vec3::new(0.0, 2.0, 0.0);
    let target = Vec3::new(4.0, 0.0, 1.0);
    let ray = Ray::new(origin, (target - origin).normalized());
    let t_view = (target - origin).length();
    let t_sun = 10.0 / elevation.sin();
    let direct = rho / std::f64::consts::PI * 4.0 * elevation.sin();
    let expected = direct * (-0.05 * (t_view + t_sun)).exp();
    let mut rng = pixel_stream(2, 3);
    let xs: Vec<f64> = (0..64).map(|_| trace_path(&w, &fog, &lighting, ray, 1, &mut rng).b).collect();
    let (mean, sem) = mean_and_sem(&xs);
    assert!((mean - expected).abs() <= 3.0 * sem + 1e-6 * expected, "{mean} vs {expected}");
}

#[test]
fn small_furnace_reflects_albedo() {
    let rho = 0.5;
    let ball = sphere(Vec3::zero(), 1.0, 32, 16, SemanticClass::Vehicle);
    let w = world_of(&[(ball, Material::diffuse(Rgb::splat(rho)))]);
    let lighting = Lighting {
        sun: sun(Vec3::new(0.0, -1.0, 0.0), 0.0),
        sky: Rgb::splat(1.0),
    };
    let cam = camera_at(Vec3::new(0.0, 0.0, -2.5), Vec3::zero(), 24, 24);
    let cfg = RenderConfig::new(ShadingMode::PathTracing, 16, 3);
    let (fb, gt) = render(&w, &cam, &lighting, &Medium::disabled(), &cfg).unwrap();
    let mut sum = 0.0;
    let mut n = 0;
    for y in 1..23 {
        for x in 1..23 {
            let inside = (0..9).all(|k| gt.labels[(y + k / 3 - 1) * 24 + x + k % 3 - 1] == SemanticClass::Vehicle);
            if inside {
                sum += fb.pixel(x, y).g;
                n += 1;
            }
        }
    }
    assert!(n > 100, "{n} interior pixels");
    assert!((sum / n as f64 - rho).abs() < 0.02, "{}", sum / n as f64);
}

fn street(width: usize) -> FrameSetup<f64> {
    let mut cfg = GenerationConfig::default();
    cfg.camera.width = width;
    cfg.camera.height = width;
    FrameSetup::new(&cfg, 7).unwrap()
}

#[test]
fn groundtruth_is_identical_across_modes_and_sample_counts() {
    let setup = street(40);
    let (_, reference) = setup.render(Fidelity::Lambertian).unwrap();
    for f in [Fidelity::CookTorrance, Fidelity::PathTraced(1), Fidelity::PathTraced(6)] {
        let (_, gt) = setup.render(f).unwrap();
        assert_eq!(gt, reference, "{f}");
    }
    for (d, l) in reference.depth.iter().zip(&reference.labels) {
        assert_eq!(d.is_infinite(), *l == SemanticClass::Sky);
    }
    for (n, l) in reference.normals.iter().zip(&reference.labels) {
        if *l != SemanticClass::Sky {
            assert!((n.length() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn sky_only_camera_sees_sky_at_infinity() {
    let w = world_of(&[(plane(50.0, 0.0), Material::diffuse(Rgb::splat(0.5)))]);
    let cam = camera_at(Vec3::new(0.0, 2.0, 0.0), Vec3::new(0.0, 4.0, 1.0), 16, 12);
    let lighting = Lighting {
        sun: sun(Vec3::new(0.0, -1.0, 0.0), 3.0),
        sky: Rgb::new(0.3, 0.5, 0.9),
    };
    for mode in [ShadingMode::Lambertian, ShadingMode::PathTracing] {
        let (fb, gt) = render(&w, &cam, &lighting, &Medium::disabled(), &RenderConfig::new(mode, 4, 0)).unwrap();
        assert!(gt.labels.iter().all(|&l| l == SemanticClass::Sky));
        assert!(gt.depth.iter().all(|d| *d == f64::INFINITY));
        assert!(fb.linear.iter().all(|c| *c == lighting.sky));
    }
}

#[test]
fn thread_count_does_not_change_the_frame() {
    let setup = street(32);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| setup.render(Fidelity::PathTraced(3)).unwrap())
    };
    let (a, ga) = run(1);
    let (b, gb) = run(8);
    assert_eq!(ga, gb);
    assert_eq!(a.display, b.display);
    let bits = |f: &urbansim::render::Framebuffer<f64>| -> Vec<u64> {
        f.linear.iter().flat_map(|c| c.channels()).map(f64::to_bits).collect()
    };
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn single_precision_renders_the_same_scene() {
    let mut cfg = GenerationConfig::default();
    cfg.camera.width = 32;
    cfg.camera.height = 32;
    let single = FrameSetup::<f32>::new(&cfg, 7).unwrap();
    let double = FrameSetup::<f64>::new(&cfg, 7).unwrap();
    let (fb32, gt32) = single.render(Fidelity::PathTraced(2)).unwrap();
    let (_, gt64) = double.render(Fidelity::Lambertian).unwrap();
    assert!(fb32.linear.iter().all(|c| c.is_finite() && c.min_component() >= 0.0));
    let agree = gt32.labels.iter().zip(&gt64.labels).filter(|(a, b)| a == b).count();
    assert!(agree as f64 >= 0.98 * gt64.labels.len() as f64, "{agree} of {}", gt64.labels.len());
}

#[test]
fn invalid_setups_fail_before_rendering() {
    let w = world_of(&[(plane(5.0, 0.0), Material::diffuse(Rgb::splat(0.5)))]);
    let lighting = dark_sky(sun(Vec3::new(0.0, -1.0, 0.0), 1.0));
    let ok = camera_at(Vec3::new(0.0, 2.0, -3.0), Vec3::zero(), 8, 8);
    let cfg = RenderConfig::new(ShadingMode::PathTracing, 1, 0);
    let mut bad = ok;
    bad.vertical_fov = std::f64::consts::PI;
    assert!(render(&w, &bad, &lighting, &Medium::disabled(), &cfg).is_err());
    let mut bad = ok;
    bad.width = 0;
    assert!(render(&w, &bad, &lighting, &Medium::disabled(), &cfg).is_err());
    let zero_spp = RenderConfig { spp: 0, ..cfg };
    assert!(render(&w, &ok, &lighting, &Medium::disabled(), &zero_spp).is_err());
    let mut fog = Medium::disabled();
    fog.anisotropy = 1.0;
    assert!(render(&w, &ok, &lighting, &fog, &cfg).is_err());
}
