//! Brute-force oracles shared by the integration and acceptance targets.
#![allow(dead_code)]

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use urbansim::eval::LabelMap;
use urbansim::labels::{SemanticClass, NUM_CLASSES};

/// Random map in which every pixel is void with probability `void_p` and
/// otherwise one of the first `classes` classes.
pub fn random_map(rng: &mut ChaCha8Rng, w: usize, h: usize, classes: u8, void_p: f64) -> LabelMap {
    let ids = (0..w * h)
        .map(|_| {
            if rng.random_bool(void_p) {
                SemanticClass::Void.id()
            } else {
                rng.random_range(0..classes)
            }
        })
        .collect();
    LabelMap::new(w, h, ids).unwrap()
}

/// Blocky map: a few random rectangles painted over a background class.
pub fn blocky_map(rng: &mut ChaCha8Rng, w: usize, h: usize) -> LabelMap {
    let mut ids = vec![SemanticClass::Ground.id(); w * h];
    for _ in 0..rng.random_range(1..5) {
        let class = rng.random_range(0..6u8);
        let (x0, y0) = (rng.random_range(0..w), rng.random_range(0..h));
        let (x1, y1) = (rng.random_range(x0..w) + 1, rng.random_range(y0..h) + 1);
        for y in y0..y1 {
            for x in x0..x1 {
                ids[y * w + x] = class;
            }
        }
    }
    LabelMap::new(w, h, ids).unwrap()
}

/// Pairs `(prediction, groundtruth)` of random 16x16 maps.
pub fn random_pairs(seed: u64, n: usize) -> Vec<(LabelMap, LabelMap)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let gt = random_map(&mut rng, 16, 16, 6, 0.1);
            let pred = random_map(&mut rng, 16, 16, 6, 0.05);
            (pred, gt)
        })
        .collect()
}

/// Per-class `(tp, fp, fn)` by direct definition, skipping void groundtruth
/// and pixels outside `mask`. Predicting void is never a false positive.
pub fn oracle_counts(pred: &LabelMap, gt: &LabelMap, mask: Option<&[bool]>) -> [(u64, u64, u64); NUM_CLASSES] {
    let void = SemanticClass::Void.id();
    let mut out = [(0, 0, 0); NUM_CLASSES];
    for c in 0..NUM_CLASSES as u8 {
        for i in 0..gt.ids.len() {
            if gt.ids[i] == void || mask.is_some_and(|m| !m[i]) {
                continue;
            }
            let (p, g) = (pred.ids[i], gt.ids[i]);
            if p == c && g == c {
                out[c as usize].0 += 1;
            } else if p == c && c != void {
                out[c as usize].1 += 1;
            } else if g == c {
                out[c as usize].2 += 1;
            }
        }
    }
    out
}

/// Unweighted mean of `tp / (tp + fp + fn)` over classes with any count.
pub fn oracle_mean_iou(counts: &[(u64, u64, u64)]) -> Option<f64> {
    let vals: Vec<f64> = counts
        .iter()
        .filter(|(t, p, n)| t + p + n > 0)
        .map(|&(t, p, n)| t as f64 / (t + p + n) as f64)
        .collect();
    (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
}

/// Pixels whose 4-neighbor differs in label.
pub fn oracle_boundary(gt: &LabelMap) -> Vec<bool> {
    let (w, h) = (gt.width as i64, gt.height as i64);
    let mut out = vec![false; gt.ids.len()];
    for y in 0..h {
        for x in 0..w {
            let me = gt.get(x as usize, y as usize);
            out[(y * w + x) as usize] = [(-1, 0), (1, 0), (0, -1), (0, 1)].iter().any(|(dx, dy)| {
                let (nx, ny) = (x + dx, y + dy);
                nx >= 0 && ny >= 0 && nx < w && ny < h && gt.get(nx as usize, ny as usize) != me
            });
        }
    }
    out
}

/// Chebyshev distance to the nearest seed by scanning every seed.
pub fn oracle_chebyshev(seeds: &[bool], w: usize, h: usize) -> Vec<u32> {
    let pts: Vec<(i64, i64)> = (0..w * h).filter(|&i| seeds[i]).map(|i| ((i % w) as i64, (i / w) as i64)).collect();
    (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            pts.iter()
                .map(|&(sx, sy)| (x - sx).abs().max((y - sy).abs()) as u32)
                .min()
                .unwrap_or(u32::MAX)
        })
        .collect()
}

/// Band of pixels within Chebyshev distance `width - 1` of a label edge.
pub fn oracle_band(gt: &LabelMap, width: u32) -> Vec<bool> {
    oracle_chebyshev(&oracle_boundary(gt), gt.width, gt.height)
        .into_iter()
        .map(|d| d < width)
        .collect()
}

/// Shortest 4-connected path length between two open cells by breadth-first
/// search.
pub fn bfs(grid: &[bool], w: usize, h: usize, s: (usize, usize), g: (usize, usize)) -> Option<usize> {
    let mut dist = vec![usize::MAX; w * h];
    let mut q = VecDeque::new();
    dist[s.1 * w + s.0] = 0;
    q.push_back(s);
    while let Some((c, r)) = q.pop_front() {
        if (c, r) == g {
            return Some(dist[r * w + c]);
        }
        let d = dist[r * w + c];
        let mut push = |c: usize, r: usize| {
            if grid[r * w + c] && dist[r * w + c] == usize::MAX {
                dist[r * w + c] = d + 1;
                q.push_back((c, r));
            }
        };
        if c > 0 {
            push(c - 1, r);
        }
        if c + 1 < w {
            push(c + 1, r);
        }
        if r > 0 {
            push(c, r - 1);
        }
        if r + 1 < h {
            push(c, r + 1);
        }
    }
    None
}
