//! Metric MDS by stress majorization (SMACOF).

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Layout, Method, Point};
use crate::distance::DissimilarityMatrix;
use crate::error::{Error, Result};
use crate::linalg::top_eigenpairs;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdsInit {
    /// Torgerson scaling of the double-centered squared distances.
    Classical,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdsConfig {
    pub max_iterations: usize,
    /// Stop once the relative decrease of stress falls below this.
    pub epsilon: f64,
    pub seed: u64,
    pub init: MdsInit,
}

impl Default for MdsConfig {
    fn default() -> Self {
        Self {
            max_iterations: 300,
            epsilon: 1e-6,
            seed: 0,
            init: MdsInit::Classical,
        }
    }
}

/// `sum_{i<j} (d_ij - |p_i - p_j|)^2`
pub fn raw_stress(d: &DissimilarityMatrix, positions: &[Point]) -> f64 {
    let n = d.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let dx = positions[i][0] - positions[j][0];
            let dy = positions[i][1] - positions[j][1];
            let e = libm::sqrt(dx * dx + dy * dy);
            let r = d.get(i, j) - e;
            s += r * r;
        }
    }
    s
}

fn classical_init(d: &DissimilarityMatrix, seed: u64) -> Vec<Point> {
    let n = d.len();
    let mut b = vec![0.0; n * n];
    let mut row_mean = vec![0.0; n];
    let mut grand = 0.0;
    for i in 0..n {
        for j in 0..n {
            let sq = d.get(i, j) * d.get(i, j);
            b[i * n + j] = sq;
            row_mean[i] += sq;
        }
        grand += row_mean[i];
        row_mean[i] /= n as f64;
    }
    grand /= (n * n) as f64;
    for i in 0..n {
        for j in 0..n {
            b[i * n + j] = -0.5 * (b[i * n + j] - row_mean[i] - row_mean[j] + grand);
        }
    }
    let eig = top_eigenpairs(&b, n, 2);
    let mut pos = vec![[0.0; 2]; n];
    for (axis, (value, vector)) in eig.values.iter().zip(&eig.vectors).enumerate() {
        let s = libm::sqrt(value.max(0.0));
        for (p, v) in pos.iter_mut().zip(vector) {
            p[axis] = v * s;
        }
    }
    let lead = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let second = eig.values.get(1).copied().unwrap_or(0.0);
    if second <= 1e-12 * lead {
        // rank-deficient Gram matrix: tiny seeded jitter so SMACOF can leave the line
        let scale = 1e-9 * libm::sqrt(lead.max(f64::MIN_POSITIVE));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for p in pos.iter_mut() {
            p[0] += scale * rng.random_range(-1.0..1.0);
            p[1] += scale * rng.random_range(-1.0..1.0);
        }
    }
    pos
}

fn random_init(d: &DissimilarityMatrix, seed: u64) -> Vec<Point> {
    let n = d.len();
    let mean = d.as_slice().iter().sum::<f64>() / (n * (n - 1)) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| [rng.random_range(-mean..mean), rng.random_range(-mean..mean)])
        .collect()
}

fn guttman_transform(d: &DissimilarityMatrix, x: &[Point], out: &mut [Point]) {
    let n = d.len();
    for i in 0..n {
        let mut acc = [0.0; 2];
        for j in 0..n {
            if i == j {
                continue;
            }
            let dx = x[i][0] - x[j][0];
            let dy = x[i][1] - x[j][1];
            let e = libm::sqrt(dx * dx + dy * dy);
            if e > 0.0 {
                let w = d.get(i, j) / e;
                acc[0] += w * dx;
                acc[1] += w * dy;
            }
        }
        out[i] = [acc[0] / n as f64, acc[1] / n as f64];
    }
}

fn center(points: &mut [Point]) {
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = points.iter().map(|p| p[1]).sum::<f64>() / n;
    for p in points.iter_mut() {
        p[0] -= cx;
        p[1] -= cy;
    }
}

/// Minimizes raw stress with SMACOF starting from classical (or random) scaling.
///
/// The recorded stress history never increases: a step that would raise stress
/// through rounding is discarded and ends the run.
pub fn mds_project(d: &DissimilarityMatrix, cfg: &MdsConfig) -> Result<Layout> {
    if !(cfg.epsilon > 0.0) || cfg.max_iterations == 0 {
        return Err(Error::InvalidParameter(
            "MDS needs epsilon > 0 and at least one iteration".into(),
        ));
    }
    let n = d.len();
    if n < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: n,
        });
    }
    if d.is_all_zero() {
        return Err(Error::DegenerateDistances);
    }
    let norm: f64 = d.upper_triangle().iter().map(|v| v * v).sum();

    let mut x = match cfg.init {
        MdsInit::Classical => classical_init(d, cfg.seed),
        MdsInit::Random => random_init(d, cfg.seed),
    };
    let mut next = vec![[0.0; 2]; n];
    let mut stress = raw_stress(d, &x);
    let mut history = vec![stress / norm];
    let mut iterations = 0;

    while iterations < cfg.max_iterations && stress > 0.0 {
        guttman_transform(d, &x, &mut next);
        let candidate = raw_stress(d, &next);
        if candidate > stress {
            break;
        }
        core::mem::swap(&mut x, &mut next);
        let previous = stress;
        stress = candidate;
        iterations += 1;
        history.push(stress / norm);
        if (previous - stress) / previous < cfg.epsilon {
            break;
        }
    }

    center(&mut x);
    let mut layout = Layout::from_positions(x, Method::Mds);
    layout.measure = d.measure();
    layout.stress = Some(stress / norm);
    layout.stress_history = history;
    layout.iterations_run = iterations;
    Ok(layout)
}
