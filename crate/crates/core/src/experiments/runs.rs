use std::time::Instant;

use crate::error::{Error, Result};
use crate::eval::{
    accumulate_confusion, histogram_divergence, intensity_histogram, iou, iou_vs_trimap_curve, ConfusionCounts,
    Histogram, LabelMap,
};
use crate::probe::{fine_tune, predict, train, GaussianClassModel, LabeledImage};

use super::report::ExperimentReport;

pub type ProbeModel = GaussianClassModel<f64>;

/// Pooled confusion counts of `model` over a labeled set.
pub fn evaluate(model: &ProbeModel, set: &[LabeledImage]) -> Result<ConfusionCounts> {
    let mut total = ConfusionCounts::default();
    for item in set {
        total += accumulate_confusion(&predict(model, &item.image), &item.labels, None)?;
    }
    Ok(total)
}

/// Micro-averaged mean IoU of `model` over a labeled set.
pub fn mean_iou(model: &ProbeModel, set: &[LabeledImage]) -> Result<Option<f64>> {
    Ok(iou::<f64>(&evaluate(model, set)?).mean)
}

pub fn set_histogram(set: &[LabeledImage]) -> Result<Histogram<f64>> {
    let images: Vec<&[[u8; 3]]> = set.iter().map(|s| s.image.pixels.as_slice()).collect();
    intensity_histogram(&images)
}

/// Outcome of a fidelity sweep: the report and the model trained per set.
pub struct SweepOutcome {
    pub report: ExperimentReport,
    pub models: Vec<(String, ProbeModel)>,
}

/// Trains one probe per training set and evaluates all of them on the shared
/// test set. Columns: `mean_iou` on the test set and `histogram_tv`, the
/// total variation distance between the gray-level histograms of the
/// training set and the test set.
pub fn run_fidelity_sweep(train_sets: &[(String, Vec<LabeledImage>)], test: &[LabeledImage]) -> Result<SweepOutcome> {
    if train_sets.is_empty() || test.is_empty() {
        return Err(Error::EmptyImageSet);
    }
    let start = Instant::now();
    let test_hist = set_histogram(test)?;
    let mut report = ExperimentReport::new("fidelity-sweep", "fidelity", &["mean_iou", "histogram_tv"]);
    let mut models = Vec::new();
    for (name, set) in train_sets {
        let model = train::<f64>(set)?;
        let miou = mean_iou(&model, test)?;
        let tv = histogram_divergence(&set_histogram(set)?, &test_hist)?;
        report.push(name.clone(), vec![miou, Some(tv)]);
        models.push((name.clone(), model));
    }
    report.runtime_secs = start.elapsed().as_secs_f64();
    Ok(SweepOutcome { report, models })
}

/// Axis label of the unmasked row of a trimap report.
pub const GLOBAL_ROW: &str = "global";

/// Mean IoU inside trimap bands of each width for every model, plus a final
/// unmasked `global` row. Widths must be strictly increasing.
pub fn run_trimap_experiment(models: &[(String, &ProbeModel)], test: &[LabeledImage], widths: &[u32]) -> Result<ExperimentReport> {
    if widths.is_empty() || widths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("trimap widths must be non-empty and strictly increasing".into()));
    }
    if test.is_empty() {
        return Err(Error::EmptyImageSet);
    }
    let start = Instant::now();
    let names: Vec<&str> = models.iter().map(|(n, _)| n.as_str()).collect();
    let mut report = ExperimentReport::new("trimap", "width", &names);
    let gts: Vec<LabelMap> = test.iter().map(|t| t.labels.clone()).collect();
    let mut curves = Vec::new();
    let mut globals = Vec::new();
    for (_, model) in models {
        let preds: Vec<LabelMap> = test.iter().map(|t| predict(model, &t.image)).collect();
        curves.push(iou_vs_trimap_curve::<f64>(&preds, &gts, widths)?);
        let mut total = ConfusionCounts::default();
        for (p, g) in preds.iter().zip(&gts) {
            total += accumulate_confusion(p, g, None)?;
        }
        globals.push(iou::<f64>(&total).mean);
    }
    for (i, w) in widths.iter().enumerate() {
        report.push(w.to_string(), curves.iter().map(|c| c[i].1).collect());
    }
    report.push(GLOBAL_ROW, globals);
    report.runtime_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Row labels of an adaptation report.
pub const TARGET_ONLY: &str = "target-only";
pub const SIM_SMALL: &str = "sim-small";
pub const SIM_FULL: &str = "sim-full";
pub const FINETUNE_SELECTED: &str = "sim-full+finetune";

pub fn finetune_row(lambda: f64) -> String {
    format!("sim-full+finetune@{lambda}")
}

/// Training configurations compared on the target test set:
///
/// * `target-only`: trained on the whole target training set.
/// * `sim-small`: trained on the first quarter of the simulated set.
/// * `sim-full`: trained on the whole simulated set.
/// * `sim-full+finetune@λ`: `sim-full` blended toward the first
///   `target_fraction` of the target training set, one row per grid value.
/// * `sim-full+finetune`: the grid value with the best validation IoU, ties
///   to the smaller weight. Validation uses the target training images left
///   out of fine-tuning, or the fine-tuning images when none are left.
///
/// Columns: `mean_iou` on the test set, the blend weight `lambda` and
/// `validation_iou`.
pub fn run_adaptation_experiment(
    sim: &[LabeledImage],
    target_train: &[LabeledImage],
    target_fraction: f64,
    lambdas: &[f64],
    target_test: &[LabeledImage],
) -> Result<ExperimentReport> {
    if !(target_fraction > 0.0 && target_fraction <= 1.0) {
        return Err(Error::Config(format!("target fraction {target_fraction} outside (0, 1]")));
    }
    if lambdas.is_empty() || lambdas.iter().any(|l| !(0.0..=1.0).contains(l)) {
        return Err(Error::Config("fine-tune weights must be a non-empty list in [0, 1]".into()));
    }
    if sim.is_empty() || target_train.is_empty() || target_test.is_empty() {
        return Err(Error::EmptyImageSet);
    }
    let start = Instant::now();
    let k = ((target_fraction * target_train.len() as f64).ceil() as usize).clamp(1, target_train.len());
    let (tune, rest) = target_train.split_at(k);
    let validation = if rest.is_empty() { tune } else { rest };

    let mut report = ExperimentReport::new("adaptation", "configuration", &["mean_iou", "lambda", "validation_iou"]);
    let target_model = train::<f64>(target_train)?;
    report.push(TARGET_ONLY, vec![mean_iou(&target_model, target_test)?, None, None]);
    let small = &sim[..sim.len().div_ceil(4)];
    let small_model = train::<f64>(small)?;
    report.push(SIM_SMALL, vec![mean_iou(&small_model, target_test)?, None, None]);
    let sim_model = train::<f64>(sim)?;
    report.push(SIM_FULL, vec![mean_iou(&sim_model, target_test)?, None, None]);

    let mut best: Option<(f64, Option<f64>, Option<f64>)> = None;
    for &lambda in lambdas {
        let tuned = fine_tune(&sim_model, tune, lambda)?;
        let test_iou = mean_iou(&tuned, target_test)?;
        let val_iou = mean_iou(&tuned, validation)?;
        report.push(finetune_row(lambda), vec![test_iou, Some(lambda), val_iou]);
        let better = match best {
            None => true,
            Some((bl, _, bv)) => val_iou.unwrap_or(f64::NEG_INFINITY) > bv.unwrap_or(f64::NEG_INFINITY)
                || (val_iou == bv && lambda < bl),
        };
        if better {
            best = Some((lambda, test_iou, val_iou));
        }
    }
    let (lambda, test_iou, val_iou) = best.expect("non-empty grid");
    report.push(FINETUNE_SELECTED, vec![test_iou, Some(lambda), val_iou]);
    report.runtime_secs = start.elapsed().as_secs_f64();
    Ok(report)
}
