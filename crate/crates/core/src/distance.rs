//! Dissimilarities between categorical items.
//!
//! All measures depend only on the number of shared categories `k` and the
//! number of attributes `a`, because every item holds exactly one category per
//! attribute. Set measures are returned as `1 - similarity`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dataset::{EncodedItem, SubsetTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DistanceMeasure {
    Overlap,
    Jaccard,
    Dice,
    ManhattanOnehot,
    EuclideanOnehot,
}

impl DistanceMeasure {
    pub const ALL: [DistanceMeasure; 5] = [
        DistanceMeasure::Overlap,
        DistanceMeasure::Jaccard,
        DistanceMeasure::Dice,
        DistanceMeasure::ManhattanOnehot,
        DistanceMeasure::EuclideanOnehot,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DistanceMeasure::Overlap => "overlap",
            DistanceMeasure::Jaccard => "jaccard",
            DistanceMeasure::Dice => "dice",
            DistanceMeasure::ManhattanOnehot => "manhattan",
            DistanceMeasure::EuclideanOnehot => "euclidean",
        }
    }

    /// Distance between two items of `attributes` values sharing `shared` categories.
    pub fn from_shared(self, shared: usize, attributes: usize) -> f64 {
        debug_assert!(shared <= attributes && attributes > 0);
        let k = shared as f64;
        let a = attributes as f64;
        let hamming = (attributes - shared) as f64;
        match self {
            // |X| = |Y| = a, so min(|X|,|Y|) = a and (|X|+|Y|)/2 = a
            DistanceMeasure::Overlap | DistanceMeasure::Dice => hamming / a,
            DistanceMeasure::Jaccard => 2.0 * hamming / (2.0 * a - k),
            DistanceMeasure::ManhattanOnehot => 2.0 * hamming,
            DistanceMeasure::EuclideanOnehot => libm::sqrt(2.0 * hamming),
        }
    }
}

impl fmt::Display for DistanceMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DistanceMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "overlap" | "o" => Ok(DistanceMeasure::Overlap),
            "jaccard" | "j" => Ok(DistanceMeasure::Jaccard),
            "dice" | "sorensen-dice" => Ok(DistanceMeasure::Dice),
            "manhattan" | "manhattan_onehot" => Ok(DistanceMeasure::ManhattanOnehot),
            "euclidean" | "euclidean_onehot" => Ok(DistanceMeasure::EuclideanOnehot),
            _ => Err(Error::InvalidParameter(alloc::format!(
                "unknown distance `{s}`"
            ))),
        }
    }
}

fn sorted_intersection(x: &[usize], y: &[usize]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                k += 1;
                i += 1;
                j += 1;
            }
        }
    }
    k
}

/// Distance between two encoded items of the same schema.
pub fn distance(x: &EncodedItem, y: &EncodedItem, measure: DistanceMeasure) -> Result<f64> {
    if x.set_form.len() != y.set_form.len() || x.onehot_form.len() != y.onehot_form.len() {
        return Err(Error::SchemaMismatch {
            expected: x.set_form.len(),
            found: y.set_form.len(),
        });
    }
    let attributes = x.set_form.len();
    if attributes == 0 {
        return Err(Error::SchemaMismatch {
            expected: 1,
            found: 0,
        });
    }
    let shared = sorted_intersection(&x.set_form, &y.set_form);
    Ok(measure.from_shared(shared, attributes))
}

/// Number of attributes on which two assignments agree.
pub fn shared_categories(x: &[usize], y: &[usize]) -> usize {
    x.iter().zip(y).filter(|(a, b)| a == b).count()
}

/// Dense symmetric matrix with an exactly zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    n: usize,
    values: Vec<f64>,
    measure: Option<DistanceMeasure>,
}

impl DissimilarityMatrix {
    /// Builds a matrix from an `n x n` row-major buffer.
    ///
    /// The buffer must be symmetric with a zero diagonal and finite, non-negative entries.
    pub fn from_row_major(
        n: usize,
        values: Vec<f64>,
        measure: Option<DistanceMeasure>,
    ) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::InvalidParameter(alloc::format!(
                "expected {} values for a {n}x{n} matrix, got {}",
                n * n,
                values.len()
            )));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::InvalidParameter(alloc::format!(
                    "diagonal entry {i} is not zero"
                )));
            }
            for j in 0..n {
                let v = values[i * n + j];
                if !v.is_finite() || v < 0.0 || v != values[j * n + i] {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "entry ({i},{j}) is negative, non-finite or asymmetric"
                    )));
                }
            }
        }
        Ok(Self { n, values, measure })
    }

    /// Pairwise Euclidean distances of 2-D points.
    pub fn euclidean(points: &[[f64; 2]]) -> Self {
        let n = points.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = libm::hypot(points[i][0] - points[j][0], points[i][1] - points[j][1]);
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        Self {
            n,
            values,
            measure: None,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn measure(&self) -> Option<DistanceMeasure> {
        self.measure
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Upper-triangle entries in row order, `(0,1), (0,2), ..., (n-2,n-1)`.
    pub fn upper_triangle(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * (self.n.saturating_sub(1)) / 2);
        for i in 0..self.n {
            out.extend_from_slice(&self.row(i)[i + 1..]);
        }
        out
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

pub fn build_matrix(subsets: &SubsetTable, measure: DistanceMeasure) -> Result<DissimilarityMatrix> {
    let n = subsets.len();
    if n < 2 {
        return Err(Error::TooFewSubsets {
            needed: 2,
            found: n,
        });
    }
    let attributes = subsets.schema().attribute_count();
    // the measure only depends on k, so tabulate it once
    let table: Vec<f64> = (0..=attributes)
        .map(|k| measure.from_shared(k, attributes))
        .collect();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        let xi = &subsets.subset(i).values;
        for j in i + 1..n {
            let d = table[shared_categories(xi, &subsets.subset(j).values)];
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    Ok(DissimilarityMatrix {
        n,
        values,
        measure: Some(measure),
    })
}
