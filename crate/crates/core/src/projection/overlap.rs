//! Force-directed removal of glyph overlap.

use alloc::vec::Vec;

use super::{Layout, Point};
use crate::error::{Error, Result};

/// Allowed relative shortfall of `r_i + r_j` in the final separation.
pub const OVERLAP_TOLERANCE: f64 = 0.01;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapConfig {
    pub iterations: usize,
    /// Alpha decays geometrically from 1 to this value over the run.
    pub alpha_min: f64,
    /// Fraction of the offset to the anchor recovered per step at alpha 1.
    pub anchor_strength: f64,
    /// Cap on the final exact-separation sweeps.
    pub max_enforcement_passes: usize,
}

impl Default for OverlapConfig {
    fn default() -> Self {
        Self {
            iterations: 300,
            alpha_min: 0.001,
            anchor_strength: 0.1,
            max_enforcement_passes: 10_000,
        }
    }
}

/// Pushes glyph discs apart until no two overlap by more than [`OVERLAP_TOLERANCE`].
///
/// Each step resolves pairwise collisions at distance `r_i + r_j`, the lighter
/// disc moving further, and pulls every point back toward its starting position
/// with a spring whose strength decays with alpha. A final sweep separates any
/// pair still closer than allowed, so the postcondition holds regardless of the
/// iteration budget.
pub fn reduce_overlap(layout: &Layout, radii: &[f64]) -> Result<Layout> {
    reduce_overlap_with(layout, radii, &OverlapConfig::default())
}

pub fn reduce_overlap_with(layout: &Layout, radii: &[f64], cfg: &OverlapConfig) -> Result<Layout> {
    let n = layout.len();
    if radii.len() != n {
        return Err(Error::InvalidParameter(alloc::format!(
            "{} radii for {} points",
            radii.len(),
            n
        )));
    }
    if radii.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(Error::InvalidParameter("radii must be finite and non-negative".into()));
    }
    if !(cfg.alpha_min > 0.0 && cfg.alpha_min <= 1.0) {
        return Err(Error::InvalidParameter("alpha_min must lie in (0, 1]".into()));
    }

    let anchors = layout.positions.clone();
    let mut pos = anchors.clone();
    let max_r = radii.iter().copied().fold(0.0, f64::max);

    if max_r > 0.0 {
        let decay = if cfg.iterations > 1 {
            libm::pow(cfg.alpha_min, 1.0 / (cfg.iterations - 1) as f64)
        } else {
            1.0
        };
        let mut alpha = 1.0;
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..cfg.iterations {
            collide(&mut pos, radii, max_r, &mut order, 1.0, 1.0);
            let k = cfg.anchor_strength * alpha;
            for (p, a) in pos.iter_mut().zip(&anchors) {
                p[0] += k * (a[0] - p[0]);
                p[1] += k * (a[1] - p[1]);
            }
            alpha *= decay;
        }
        for _ in 0..cfg.max_enforcement_passes {
            // aim slightly past contact so the sweep terminates quickly
            if !collide(&mut pos, radii, max_r, &mut order, 1.0 - OVERLAP_TOLERANCE / 2.0, 1.0 + 1e-9) {
                break;
            }
        }
    }

    let mut out = layout.clone();
    out.pre_overlap_positions = Some(layout.original_positions().to_vec());
    out.positions = pos;
    out.overlap_reduced = true;
    Ok(out)
}

/// One Gauss-Seidel sweep over colliding pairs. A pair collides when closer than
/// `trigger * (r_i + r_j)` and is then moved to `target * (r_i + r_j)`. Returns
/// whether anything moved.
fn collide(
    pos: &mut [Point],
    radii: &[f64],
    max_r: f64,
    order: &mut [usize],
    trigger: f64,
    target: f64,
) -> bool {
    order.sort_by(|&a, &b| pos[a][0].total_cmp(&pos[b][0]).then(a.cmp(&b)));
    let mut moved = false;
    for oi in 0..order.len() {
        let i = order[oi];
        for &j in &order[oi + 1..] {
            let reach = (radii[i] + max_r) * target;
            // positions shift during the sweep, so the window is a heuristic;
            // the enforcement loop repeats until a clean pass
            if pos[j][0] - pos[i][0] > reach {
                break;
            }
            let sum = radii[i] + radii[j];
            if sum == 0.0 {
                continue;
            }
            let mut dx = pos[j][0] - pos[i][0];
            let mut dy = pos[j][1] - pos[i][1];
            let mut d = libm::hypot(dx, dy);
            if d >= trigger * sum {
                continue;
            }
            if d == 0.0 {
                let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                let theta = GOLDEN_ANGLE * (lo * 7919 + hi) as f64;
                dx = libm::cos(theta);
                dy = libm::sin(theta);
                d = 1.0;
                if i > j {
                    dx = -dx;
                    dy = -dy;
                }
            }
            let push = (target * sum - libm::hypot(pos[j][0] - pos[i][0], pos[j][1] - pos[i][1])) / d;
            let (wi, wj) = weights(radii[i], radii[j]);
            pos[i][0] -= dx * push * wi;
            pos[i][1] -= dy * push * wi;
            pos[j][0] += dx * push * wj;
            pos[j][1] += dy * push * wj;
            moved = true;
        }
    }
    moved
}

/// Share of the separation taken by each disc; the smaller one moves more.
fn weights(ri: f64, rj: f64) -> (f64, f64) {
    let (a, b) = (ri * ri, rj * rj);
    if a + b == 0.0 {
        (0.5, 0.5)
    } else {
        (b / (a + b), a / (a + b))
    }
}
