use std::fmt::Write as _;
use std::ops::{Add, AddAssign};
use std::path::Path;

use crate::error::Result;
use crate::labels::{SemanticClass, NUM_CLASSES};
use crate::real::Real;

use super::{check_same_size, LabelMap, Trimap};

/// Per-class true positives, false positives and false negatives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: [u64; NUM_CLASSES],
    pub fp: [u64; NUM_CLASSES],
    pub fn_: [u64; NUM_CLASSES],
    /// Non-void pixels that were evaluated.
    pub pixels: u64,
}

impl AddAssign for ConfusionCounts {
    fn add_assign(&mut self, o: Self) {
        for c in 0..NUM_CLASSES {
            self.tp[c] += o.tp[c];
            self.fp[c] += o.fp[c];
            self.fn_[c] += o.fn_[c];
        }
        self.pixels += o.pixels;
    }
}

impl Add for ConfusionCounts {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        self += o;
        self
    }
}

impl std::iter::Sum for ConfusionCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Add::add)
    }
}

/// Counts over the non-void groundtruth pixels, restricted to `mask` when
/// given. A prediction of void on a labeled pixel is a miss for the true
/// class and a false positive for nothing.
pub fn accumulate_confusion(pred: &LabelMap, gt: &LabelMap, mask: Option<&Trimap>) -> Result<ConfusionCounts> {
    check_same_size(pred, gt)?;
    if let Some(m) = mask {
        if (m.width, m.height) != (gt.width, gt.height) {
            return Err(crate::error::Error::DimensionMismatch(m.width, m.height, gt.width, gt.height));
        }
    }
    let void = SemanticClass::Void.id();
    let mut out = ConfusionCounts::default();
    for (i, (&p, &g)) in pred.ids.iter().zip(&gt.ids).enumerate() {
        if g == void || mask.is_some_and(|m| !m.mask[i]) {
            continue;
        }
        out.pixels += 1;
        if p == g {
            out.tp[g as usize] += 1;
        } else {
            out.fn_[g as usize] += 1;
            if p != void {
                out.fp[p as usize] += 1;
            }
        }
    }
    Ok(out)
}

/// Per-class `TP / (TP + FP + FN)` and their unweighted mean over classes
/// with a nonzero denominator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IouReport<T> {
    pub per_class: [Option<T>; NUM_CLASSES],
    pub mean: Option<T>,
}

pub fn iou<T: Real>(counts: &ConfusionCounts) -> IouReport<T> {
    let mut per_class = [None; NUM_CLASSES];
    let mut sum = T::zero();
    let mut n = 0u32;
    for c in 0..NUM_CLASSES {
        let denom = counts.tp[c] + counts.fp[c] + counts.fn_[c];
        if denom > 0 {
            let v = T::from_u64(counts.tp[c]).unwrap() / T::from_u64(denom).unwrap();
            per_class[c] = Some(v);
            sum = sum + v;
            n += 1;
        }
    }
    let mean = (n > 0).then(|| sum / T::from_u32(n).unwrap());
    IouReport { per_class, mean }
}

fn fmt_opt<T: Real>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| format!("{v}"))
}

/// `class,tp,fp,fn,iou` rows followed by a `mean` row. Classes without any
/// counts leave the IoU column empty.
pub fn write_iou_csv(counts: &ConfusionCounts, path: &Path) -> Result<()> {
    let report = iou::<f64>(counts);
    let mut s = String::from("class,tp,fp,fn,iou\n");
    for c in SemanticClass::ALL {
        let i = c.id() as usize;
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            c.name(),
            counts.tp[i],
            counts.fp[i],
            counts.fn_[i],
            fmt_opt(report.per_class[i])
        );
    }
    let _ = writeln!(s, "mean,,,,{}", fmt_opt(report.mean));
    std::fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_hand_case() {
        let (a, b) = (0u8, 3u8);
        let gt = LabelMap::new(2, 2, vec![a, a, b, b]).unwrap();
        let pred = LabelMap::new(2, 2, vec![a, b, b, b]).unwrap();
        let c = accumulate_confusion(&pred, &gt, None).unwrap();
        assert_eq!((c.tp[0], c.fp[0], c.fn_[0]), (1, 0, 1));
        assert_eq!((c.tp[3], c.fp[3], c.fn_[3]), (2, 1, 0));
        let r = iou::<f64>(&c);
        assert_eq!(r.per_class[0], Some(0.5));
        assert_eq!(r.per_class[3], Some(2.0 / 3.0));
        assert!((r.mean.unwrap() - 7.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn void_groundtruth_counts_nothing() {
        let gt = LabelMap::uniform(3, 3, SemanticClass::Void);
        let pred = LabelMap::uniform(3, 3, SemanticClass::Tree);
        let c = accumulate_confusion(&pred, &gt, None).unwrap();
        assert_eq!(c, ConfusionCounts::default());
        assert_eq!(iou::<f64>(&c).mean, None);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let a = LabelMap::uniform(2, 3, SemanticClass::Sky);
        let b = LabelMap::uniform(3, 2, SemanticClass::Sky);
        assert!(accumulate_confusion(&a, &b, None).is_err());
    }
}
