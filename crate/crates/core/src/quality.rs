//! Projection quality: trustworthiness, continuity, normalized stress, Shepard
//! correlation and neighborhood hit.
//!
//! Distance ties inside neighbourhoods and ranks are broken by ascending point
//! id; only the Shepard correlation uses average ranks.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::SubsetTable;
use crate::distance::{DissimilarityMatrix, DistanceMeasure};
use crate::error::{Error, Result};
use crate::fracturedness::Labeling;
use crate::projection::{Method, Point};

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("neighborhood size must be positive".into()));
    }
    if k >= n {
        return Err(Error::NeighborhoodTooLarge { k, n });
    }
    Ok(())
}

fn check_sizes(high: &DissimilarityMatrix, n: usize) -> Result<()> {
    if high.len() != n {
        return Err(Error::LabelingMismatch {
            expected: high.len(),
            found: n,
        });
    }
    Ok(())
}

/// All other points ordered by distance from `i`, ties by id.
fn neighbour_order(d: &DissimilarityMatrix, i: usize) -> Vec<usize> {
    let row = d.row(i);
    let mut order: Vec<usize> = (0..d.len()).filter(|&j| j != i).collect();
    order.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
    order
}

/// Trustworthiness of `low` as a representation of `high`: penalizes points that
/// enter a k-neighbourhood in `low` without being in it in `high`, weighted by
/// how far down the `high` ranking they sit.
pub fn trustworthiness_between(high: &DissimilarityMatrix, low: &DissimilarityMatrix, k: usize) -> Result<f64> {
    let n = high.len();
    check_sizes(high, low.len())?;
    check_k(k, n)?;
    let mut rank = vec![0usize; n];
    let mut penalty = 0u64;
    for i in 0..n {
        for (r, j) in neighbour_order(high, i).into_iter().enumerate() {
            rank[j] = r + 1;
        }
        let near_low = neighbour_order(low, i);
        for &j in &near_low[..k] {
            if rank[j] > k {
                penalty += (rank[j] - k) as u64;
            }
        }
    }
    if penalty == 0 {
        return Ok(1.0);
    }
    let (n, k) = (n as f64, k as f64);
    let scale = if k < n / 2.0 {
        2.0 / (n * k * (2.0 * n - 3.0 * k - 1.0))
    } else {
        2.0 / (n * (n - k) * (n - k - 1.0))
    };
    Ok(1.0 - scale * penalty as f64)
}

pub fn trustworthiness(high: &DissimilarityMatrix, positions: &[Point], k: usize) -> Result<f64> {
    trustworthiness_between(high, &DissimilarityMatrix::euclidean(positions), k)
}

/// Trustworthiness with the two spaces swapped: penalizes original neighbours
/// that the layout pushes away.
pub fn continuity(high: &DissimilarityMatrix, positions: &[Point], k: usize) -> Result<f64> {
    trustworthiness_between(&DissimilarityMatrix::euclidean(positions), high, k)
}

/// Residual stress after the best uniform scaling of the layout distances,
/// relative to the sum of squared original distances.
pub fn normalized_stress(high: &DissimilarityMatrix, positions: &[Point]) -> Result<f64> {
    let n = positions.len();
    check_sizes(high, n)?;
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, found: n });
    }
    if high.is_all_zero() {
        return Err(Error::DegenerateDistances);
    }
    let low = DissimilarityMatrix::euclidean(positions);
    let (mut dd, mut ee, mut de) = (0.0, 0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let (d, e) = (high.get(i, j), low.get(i, j));
            dd += d * d;
            ee += e * e;
            de += d * e;
        }
    }
    let alpha = if ee > 0.0 { de / ee } else { 0.0 };
    let mut residual = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let r = high.get(i, j) - alpha * low.get(i, j);
            residual += r * r;
        }
    }
    Ok(residual / dd)
}

/// Ranks starting at 1, tied values sharing their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman correlation of two samples; errors when either is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = rx.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean) * (a - mean);
        syy += (b - mean) * (b - mean);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ConstantDistances);
    }
    Ok(sxy / libm::sqrt(sxx * syy))
}

/// Spearman correlation between original and layout distances over all pairs.
pub fn shepard_correlation(high: &DissimilarityMatrix, positions: &[Point]) -> Result<f64> {
    let n = positions.len();
    check_sizes(high, n)?;
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: n });
    }
    let low = DissimilarityMatrix::euclidean(positions);
    spearman(&high.upper_triangle(), &low.upper_triangle())
}

/// Mean share of each point's k nearest layout neighbours (itself excluded)
/// that carry its label.
pub fn neighborhood_hit(positions: &[Point], labeling: &Labeling, k: usize) -> Result<f64> {
    let n = positions.len();
    if labeling.len() != n {
        return Err(Error::LabelingMismatch {
            expected: n,
            found: labeling.len(),
        });
    }
    check_k(k, n)?;
    let low = DissimilarityMatrix::euclidean(positions);
    let hits: usize = (0..n)
        .map(|i| {
            neighbour_order(&low, i)[..k]
                .iter()
                .filter(|&&j| labeling.label(j) == labeling.label(i))
                .count()
        })
        .sum();
    Ok(hits as f64 / (n * k) as f64)
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 0 { (v[m - 1] + v[m]) / 2.0 } else { v[m] })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub method: Method,
    /// Measure grounding the original distances.
    pub measure: DistanceMeasure,
    pub k: usize,
    pub tw: f64,
    pub ct: f64,
    pub ns: f64,
    pub sc: f64,
    /// In schema order.
    pub nh_per_attribute: Vec<f64>,
    pub nh_mean: f64,
    pub nh_median: f64,
}

/// Every metric for one layout of `subsets` against original distances `high`.
pub fn quality_report(
    high: &DissimilarityMatrix,
    positions: &[Point],
    subsets: &SubsetTable,
    method: Method,
    k: usize,
) -> Result<QualityReport> {
    let measure = high.measure().ok_or_else(|| {
        Error::InvalidParameter("original distances must come from a distance measure".into())
    })?;
    let nh_per_attribute = (0..subsets.schema().attribute_count())
        .map(|a| neighborhood_hit(positions, &Labeling::from_subsets(subsets, a)?, k))
        .collect::<Result<Vec<_>>>()?;
    let nh_mean = nh_per_attribute.iter().sum::<f64>() / nh_per_attribute.len() as f64;
    let nh_median = median(&nh_per_attribute).unwrap_or(f64::NAN);
    Ok(QualityReport {
        method,
        measure,
        k,
        tw: trustworthiness(high, positions, k)?,
        ct: continuity(high, positions, k)?,
        ns: normalized_stress(high, positions)?,
        sc: shepard_correlation(high, positions)?,
        nh_per_attribute,
        nh_mean,
        nh_median,
    })
}
