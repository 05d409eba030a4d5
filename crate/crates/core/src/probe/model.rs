use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::LabelMap;
use crate::labels::{SemanticClass, NUM_CLASSES};
use crate::real::Real;

use super::features::{pixel_features, FEATURES};
use super::{LabeledImage, RgbImage};

pub const VARIANCE_FLOOR: f64 = 1e-6;
pub const MODEL_VERSION: u32 = 1;
const HEADER: &str = "urbansim-probe";

/// Diagonal Gaussian statistics of one class. A class with prior 0 is unseen
/// and never predicted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassStats<T> {
    pub prior: T,
    /// Training pixels; fractional after blending.
    pub count: T,
    pub mean: [T; FEATURES],
    pub var: [T; FEATURES],
}

impl<T: Real> ClassStats<T> {
    fn unseen() -> Self {
        Self {
            prior: T::zero(),
            count: T::zero(),
            mean: [T::zero(); FEATURES],
            var: [T::one(); FEATURES],
        }
    }

    pub fn is_seen(&self) -> bool {
        self.prior > T::zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianClassModel<T> {
    pub classes: [ClassStats<T>; NUM_CLASSES],
}

#[derive(Clone, Copy)]
struct Accum<T> {
    n: [u64; NUM_CLASSES],
    sum: [[T; FEATURES]; NUM_CLASSES],
    sq: [[T; FEATURES]; NUM_CLASSES],
}

impl<T: Real> Accum<T> {
    fn zero() -> Self {
        Self {
            n: [0; NUM_CLASSES],
            sum: [[T::zero(); FEATURES]; NUM_CLASSES],
            sq: [[T::zero(); FEATURES]; NUM_CLASSES],
        }
    }

    fn of_image(item: &LabeledImage) -> Self {
        let mut acc = Self::zero();
        let void = SemanticClass::Void.id();
        for (f, &label) in pixel_features::<T>(&item.image).iter().zip(&item.labels.ids) {
            if label == void {
                continue;
            }
            let c = label as usize;
            acc.n[c] += 1;
            for k in 0..FEATURES {
                acc.sum[c][k] = acc.sum[c][k] + f[k];
                acc.sq[c][k] = acc.sq[c][k] + f[k] * f[k];
            }
        }
        acc
    }

    fn merge(&mut self, o: &Self) {
        for c in 0..NUM_CLASSES {
            self.n[c] += o.n[c];
            for k in 0..FEATURES {
                self.sum[c][k] = self.sum[c][k] + o.sum[c][k];
                self.sq[c][k] = self.sq[c][k] + o.sq[c][k];
            }
        }
    }
}

fn floor<T: Real>(v: T) -> T {
    v.max(T::of(VARIANCE_FLOOR))
}

/// Per-class maximum-likelihood statistics over all non-void pixels. Images
/// are processed in parallel and merged in input order, so the result does
/// not depend on the thread count.
pub fn train<T: Real>(set: &[LabeledImage]) -> Result<GaussianClassModel<T>> {
    for item in set {
        if (item.image.width, item.image.height) != (item.labels.width, item.labels.height) {
            return Err(Error::DimensionMismatch(
                item.image.width,
                item.image.height,
                item.labels.width,
                item.labels.height,
            ));
        }
    }
    let parts: Vec<Accum<T>> = set.par_iter().map(Accum::of_image).collect();
    let mut acc = Accum::zero();
    for p in &parts {
        acc.merge(p);
    }
    let total: u64 = acc.n.iter().sum();
    if total == 0 {
        return Err(Error::EmptyImageSet);
    }
    let total_t = T::from_u64(total).unwrap();
    let classes = std::array::from_fn(|c| {
        if acc.n[c] == 0 {
            return ClassStats::unseen();
        }
        let n = T::from_u64(acc.n[c]).unwrap();
        let mean: [T; FEATURES] = std::array::from_fn(|k| acc.sum[c][k] / n);
        ClassStats {
            prior: n / total_t,
            count: n,
            mean,
            var: std::array::from_fn(|k| floor(acc.sq[c][k] / n - mean[k] * mean[k])),
        }
    });
    Ok(GaussianClassModel { classes })
}

/// Blends class statistics toward those of `set` with weight `lambda`.
///
/// For classes present on both sides the means, second moments and priors
/// are mixed as `(1 − λ)·old + λ·new`. A class present on one side only keeps
/// that side's moments and its prior is scaled by that side's weight, so
/// `λ = 0` returns the model unchanged and `λ = 1` returns `train(set)`.
pub fn fine_tune<T: Real>(model: &GaussianClassModel<T>, set: &[LabeledImage], lambda: T) -> Result<GaussianClassModel<T>> {
    if !(lambda >= T::zero() && lambda <= T::one()) {
        return Err(Error::Config(format!("fine-tune weight {lambda} outside [0, 1]")));
    }
    if lambda == T::zero() {
        return Ok(model.clone());
    }
    let target = train::<T>(set)?;
    if lambda == T::one() {
        let mut out = target;
        for (c, stats) in out.classes.iter_mut().enumerate() {
            if !stats.is_seen() && model.classes[c].is_seen() {
                *stats = ClassStats {
                    prior: T::zero(),
                    ..model.classes[c]
                };
            }
        }
        return Ok(out);
    }
    let keep = T::one() - lambda;
    let classes = std::array::from_fn(|c| {
        let (old, new) = (&model.classes[c], &target.classes[c]);
        match (old.is_seen(), new.is_seen()) {
            (true, true) => {
                let mean: [T; FEATURES] = std::array::from_fn(|k| keep * old.mean[k] + lambda * new.mean[k]);
                ClassStats {
                    prior: keep * old.prior + lambda * new.prior,
                    count: keep * old.count + lambda * new.count,
                    mean,
                    var: std::array::from_fn(|k| {
                        let m2 = keep * (old.var[k] + old.mean[k] * old.mean[k])
                            + lambda * (new.var[k] + new.mean[k] * new.mean[k]);
                        floor(m2 - mean[k] * mean[k])
                    }),
                }
            }
            (true, false) => ClassStats {
                prior: keep * old.prior,
                ..*old
            },
            (false, true) => ClassStats {
                prior: lambda * new.prior,
                ..*new
            },
            (false, false) => *old,
        }
    });
    Ok(GaussianClassModel { classes })
}

impl<T: Real> GaussianClassModel<T> {
    pub fn seen_classes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..NUM_CLASSES).filter(|&c| self.classes[c].is_seen())
    }

    /// Unnormalized log posterior of every class for one feature vector;
    /// `-∞` for unseen classes.
    pub fn log_posteriors(&self, f: &[T; FEATURES]) -> [T; NUM_CLASSES] {
        std::array::from_fn(|c| {
            let s = &self.classes[c];
            if !s.is_seen() {
                return T::neg_infinity();
            }
            let mut lp = s.prior.ln();
            for k in 0..FEATURES {
                let d = f[k] - s.mean[k];
                lp = lp - T::of(0.5) * ((T::TAU() * s.var[k]).ln() + d * d / s.var[k]);
            }
            lp
        })
    }

    /// Highest log posterior; ties go to the lowest class id.
    pub fn classify(&self, f: &[T; FEATURES]) -> u8 {
        let lp = self.log_posteriors(f);
        let mut best = None;
        for c in self.seen_classes() {
            if best.is_none_or(|b: usize| lp[c] > lp[b]) {
                best = Some(c);
            }
        }
        best.unwrap_or(SemanticClass::Void.id() as usize) as u8
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{HEADER} {MODEL_VERSION}\nfeatures {FEATURES}\n");
        for c in SemanticClass::ALL {
            let st = &self.classes[c.id() as usize];
            let _ = write!(s, "class {} prior {} count {} mean", c.name(), st.prior, st.count);
            for v in st.mean {
                let _ = write!(s, " {v}");
            }
            s.push_str(" var");
            for v in st.var {
                let _ = write!(s, " {v}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, msg: &str| Error::parse("probe model", line, msg);
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, head) = lines.next().ok_or_else(|| err(1, "empty file"))?;
        if head.trim() != format!("{HEADER} {MODEL_VERSION}") {
            return Err(err(1, "unsupported header or version"));
        }
        let (ln, feat) = lines.next().ok_or_else(|| err(2, "missing feature count"))?;
        if feat.trim() != format!("features {FEATURES}") {
            return Err(err(ln, "feature count mismatch"));
        }
        let mut classes = [ClassStats::<T>::unseen(); NUM_CLASSES];
        let mut found = [false; NUM_CLASSES];
        for (ln, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            let expected = 8 + 2 * FEATURES;
            if tok.len() != expected || tok[0] != "class" || tok[2] != "prior" || tok[4] != "count" || tok[6] != "mean" {
                return Err(err(ln, "malformed class record"));
            }
            let class: SemanticClass = tok[1].parse().map_err(|_| err(ln, "unknown class"))?;
            let num = |s: &str| s.parse::<T>().map_err(|_| err(ln, "bad number"));
            let var_at = 7 + FEATURES;
            if tok[var_at] != "var" {
                return Err(err(ln, "malformed class record"));
            }
            let mut st = ClassStats {
                prior: num(tok[3])?,
                count: num(tok[5])?,
                mean: [T::zero(); FEATURES],
                var: [T::zero(); FEATURES],
            };
            for k in 0..FEATURES {
                st.mean[k] = num(tok[7 + k])?;
                st.var[k] = num(tok[var_at + 1 + k])?;
            }
            if !(st.prior >= T::zero()) || st.var.iter().any(|v| !(*v > T::zero())) {
                return Err(err(ln, "negative prior or non-positive variance"));
            }
            let i = class.id() as usize;
            if found[i] {
                return Err(err(ln, "duplicate class"));
            }
            found[i] = true;
            classes[i] = st;
        }
        let model = Self { classes };
        if model.seen_classes().next().is_none() {
            return Err(err(0, "no class has a positive prior"));
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

/// Per-pixel class decision; pixels are classified in parallel.
pub fn predict<T: Real>(model: &GaussianClassModel<T>, image: &RgbImage) -> LabelMap {
    let ids = pixel_features::<T>(image).par_iter().map(|f| model.classify(f)).collect();
    LabelMap {
        width: image.width,
        height: image.height,
        ids,
    }
}
