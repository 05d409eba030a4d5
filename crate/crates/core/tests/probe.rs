//! Gaussian probe classifier against closed forms and brute-force density
//! evaluation.

#![allow(clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use urbansim::eval::{accumulate_confusion, iou, LabelMap};
use urbansim::labels::{SemanticClass, NUM_CLASSES};
use urbansim::probe::{
    fine_tune, pixel_features, predict, train, GaussianClassModel, LabeledImage, RgbImage, FEATURES, VARIANCE_FLOOR,
};

/// Image whose class decides a saturated color, with a little noise.
fn colored(seed: u64, w: usize, h: usize, palette: &[(SemanticClass, [u8; 3])]) -> LabeledImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut px = Vec::new();
    let mut ids = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let (class, color) = palette[(x / 4 + y / 4) % palette.len()];
            px.push(color.map(|c| c.saturating_add(rng.random_range(0..6))));
            ids.push(class.id());
        }
    }
    LabeledImage::new(RgbImage::new(w, h, px).unwrap(), LabelMap::new(w, h, ids).unwrap()).unwrap()
}

const RGB_CLASSES: [(SemanticClass, [u8; 3]); 3] = [
    (SemanticClass::Building, [220, 20, 20]),
    (SemanticClass::Tree, [20, 220, 20]),
    (SemanticClass::Sky, [20, 20, 220]),
];

#[test]
fn separable_colors_are_recovered_exactly() {
    let train_set: Vec<_> = (0..3).map(|s| colored(s, 24, 24, &RGB_CLASSES)).collect();
    let model = train::<f64>(&train_set).unwrap();
    assert_eq!(model.seen_classes().collect::<Vec<_>>(), vec![0, 2, 5]);
    let priors: f64 = model.classes.iter().map(|c| c.prior).sum();
    assert!((priors - 1.0).abs() < 1e-12);
    let test = colored(99, 24, 24, &RGB_CLASSES);
    let pred = predict(&model, &test.image);
    let r = iou::<f64>(&accumulate_confusion(&pred, &test.labels, None).unwrap());
    assert_eq!(r.mean, Some(1.0));
}

#[test]
fn single_class_training_predicts_that_class_everywhere() {
    let set = vec![colored(1, 10, 10, &[(SemanticClass::Ground, [90, 90, 90])])];
    let model = train::<f64>(&set).unwrap();
    assert_eq!(model.seen_classes().collect::<Vec<_>>(), vec![SemanticClass::Ground.id() as usize]);
    let other = colored(2, 10, 10, &RGB_CLASSES);
    let pred = predict(&model, &other.image);
    assert!(pred.ids.iter().all(|&i| i == SemanticClass::Ground.id()));
}

#[test]
fn void_only_training_is_an_error() {
    let img = RgbImage::new(2, 2, vec![[1, 2, 3]; 4]).unwrap();
    let set = vec![LabeledImage::new(img, LabelMap::uniform(2, 2, SemanticClass::Void)).unwrap()];
    assert!(train::<f64>(&set).is_err());
    assert!(train::<f64>(&[]).is_err());
}

#[test]
fn constant_features_hit_the_variance_floor() {
    let img = RgbImage::new(5, 1, vec![[10, 20, 30]; 5]).unwrap();
    let set = vec![LabeledImage::new(img, LabelMap::uniform(5, 1, SemanticClass::Vehicle)).unwrap()];
    let m = train::<f64>(&set).unwrap();
    let st = &m.classes[SemanticClass::Vehicle.id() as usize];
    for k in 0..9 {
        assert_eq!(st.var[k], VARIANCE_FLOOR);
    }
    assert!(st.var.iter().all(|v| v.is_finite() && *v > 0.0));
}

#[test]
fn training_and_prediction_are_thread_independent() {
    let set: Vec<_> = (0..6).map(|s| colored(s, 20, 16, &RGB_CLASSES)).collect();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let m = train::<f64>(&set).unwrap();
            let p = predict(&m, &set[0].image);
            (m, p)
        })
    };
    let (m1, p1) = run(1);
    let (m8, p8) = run(8);
    assert_eq!(m1.to_text(), m8.to_text());
    assert_eq!(p1, p8);
}

#[test]
fn fine_tune_endpoints() {
    let source = train::<f64>(&[colored(1, 16, 16, &RGB_CLASSES)]).unwrap();
    let shifted = [
        (SemanticClass::Building, [180, 60, 40]),
        (SemanticClass::Ground, [100, 100, 100]),
    ];
    let target_set = vec![colored(2, 16, 16, &shifted)];
    assert_eq!(fine_tune(&source, &target_set, 0.0).unwrap(), source);

    let full = fine_tune(&source, &target_set, 1.0).unwrap();
    let direct = train::<f64>(&target_set).unwrap();
    for c in 0..NUM_CLASSES {
        if direct.classes[c].is_seen() {
            assert_eq!(full.classes[c], direct.classes[c]);
        } else {
            assert_eq!(full.classes[c].prior, 0.0);
        }
    }
    let img = &target_set[0].image;
    assert_eq!(predict(&full, img), predict(&direct, img));

    let half = fine_tune(&source, &target_set, 0.5).unwrap();
    let b = SemanticClass::Building.id() as usize;
    for k in 0..FEATURES {
        let m = 0.5 * source.classes[b].mean[k] + 0.5 * direct.classes[b].mean[k];
        assert!((half.classes[b].mean[k] - m).abs() < 1e-12);
    }
    let priors: f64 = half.classes.iter().map(|c| c.prior).sum();
    assert!((priors - 1.0).abs() < 1e-12);
    assert!(fine_tune(&source, &target_set, 1.5).is_err());
    assert!(fine_tune(&source, &target_set, f64::NAN).is_err());
}

/// Log of the full product of univariate normal densities times the prior.
fn brute_log_density(m: &GaussianClassModel<f64>, c: usize, f: &[f64; FEATURES]) -> f64 {
    let s = &m.classes[c];
    let mut p = s.prior;
    for k in 0..FEATURES {
        let z = (f[k] - s.mean[k]) / s.var[k].sqrt();
        p *= (-0.5 * z * z).exp() / (std::f64::consts::TAU * s.var[k]).sqrt();
    }
    p.ln()
}

#[test]
fn decisions_match_brute_force_density_argmax() {
    let palette = [
        (SemanticClass::Building, [150, 90, 80]),
        (SemanticClass::Tree, [90, 140, 70]),
        (SemanticClass::Ground, [110, 110, 100]),
        (SemanticClass::Sky, [130, 150, 200]),
    ];
    let set: Vec<_> = (0..2).map(|s| colored(s, 20, 20, &palette)).collect();
    let model = train::<f64>(&set).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let px: Vec<[u8; 3]> = (0..100).map(|_| [rng.random(), rng.random(), rng.random()]).collect();
    let img = RgbImage::new(10, 10, px).unwrap();
    let pred = predict(&model, &img);
    for (i, f) in pixel_features::<f64>(&img).iter().enumerate() {
        let scores: Vec<(usize, f64)> = model.seen_classes().map(|c| (c, brute_log_density(&model, c, f))).collect();
        let lp = model.log_posteriors(f);
        for &(c, s) in &scores {
            if s.is_finite() {
                assert!((lp[c] - s).abs() <= 1e-9 * s.abs().max(1.0));
            }
        }
        let (best, top) = scores
            .iter()
            .copied()
            .fold((usize::MAX, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        let runner_up = scores.iter().filter(|(c, _)| *c != best).map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        if top.is_finite() && top - runner_up > 1e-6 {
            assert_eq!(pred.ids[i] as usize, best, "pixel {i}");
        }
    }
}

#[test]
fn ties_go_to_the_lowest_class_id() {
    let mut model = train::<f64>(&[colored(1, 8, 8, &RGB_CLASSES)]).unwrap();
    let b = model.classes[0];
    model.classes[2] = b;
    model.classes[5] = b;
    let f = [0.3; FEATURES];
    assert_eq!(model.classify(&f), 0);
}

#[test]
fn uniform_prior_scaling_leaves_decisions_unchanged() {
    let set = vec![colored(4, 16, 16, &RGB_CLASSES)];
    let model = train::<f64>(&set).unwrap();
    let mut scaled = model.clone();
    for c in scaled.classes.iter_mut() {
        c.prior *= 0.125;
    }
    let img = colored(5, 16, 16, &RGB_CLASSES).image;
    assert_eq!(predict(&model, &img), predict(&scaled, &img));
}

#[test]
fn text_round_trip_is_exact() {
    let set = vec![colored(6, 12, 12, &RGB_CLASSES)];
    let model = train::<f64>(&set).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("probe.txt");
    model.save(&path).unwrap();
    let back = GaussianClassModel::<f64>::load(&path).unwrap();
    assert_eq!(back, model);
    assert!(model.to_text().starts_with("urbansim-probe 1\n"));

    let bad_version = model.to_text().replacen("urbansim-probe 1", "urbansim-probe 2", 1);
    assert!(GaussianClassModel::<f64>::from_text(&bad_version).is_err());
    let truncated: String = model.to_text().lines().take(3).map(|l| &l[..l.len() / 2]).collect::<Vec<_>>().join("\n");
    assert!(GaussianClassModel::<f64>::from_text(&truncated).is_err());
    assert!(GaussianClassModel::<f64>::from_text("").is_err());
}

#[test]
fn single_precision_probe_agrees_with_double() {
    let set: Vec<_> = (0..2).map(|s| colored(s, 16, 16, &RGB_CLASSES)).collect();
    let img = colored(9, 16, 16, &RGB_CLASSES).image;
    let a = predict(&train::<f32>(&set).unwrap(), &img);
    let b = predict(&train::<f64>(&set).unwrap(), &img);
    assert_eq!(a, b);
}
