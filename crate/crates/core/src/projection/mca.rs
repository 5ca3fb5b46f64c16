//! Multiple correspondence analysis of the indicator matrix of unique subsets.

use alloc::vec;
use alloc::vec::Vec;

use super::{Layout, Method};
use crate::dataset::SubsetTable;
use crate::error::{Error, Result};
use crate::linalg::jacobi_eigen;

/// Row standard coordinates on the first two principal axes.
///
/// Each unique subset is one row of the complete disjunctive table. The
/// standardized residuals `S = D_r^{-1/2} (P - r c^T) D_c^{-1/2}` are decomposed
/// through the eigenvectors of `S^T S`; row standard coordinates are
/// `D_r^{-1/2} U`. Each axis is oriented so that its largest-magnitude
/// coordinate is positive.
pub fn mca_project(subsets: &SubsetTable) -> Result<Layout> {
    let n = subsets.len();
    if n < 2 {
        return Err(Error::TooFewSubsets {
            needed: 2,
            found: n,
        });
    }
    let schema = subsets.schema();
    let q = schema.attribute_count() as f64;
    let dim = schema.dimension();

    let mut column_mass = vec![0.0; dim];
    for s in subsets.subsets() {
        for (a, &c) in s.values.iter().enumerate() {
            column_mass[schema.descriptor_id(a, c)] += 1.0;
        }
    }
    // categories never observed carry no mass and are dropped
    let columns: Vec<usize> = (0..dim).filter(|&j| column_mass[j] > 0.0).collect();
    let total = n as f64 * q;
    let row_mass = 1.0 / n as f64;
    let m = columns.len();

    let mut residual = vec![0.0; n * m];
    for (i, s) in subsets.subsets().iter().enumerate() {
        for (k, &j) in columns.iter().enumerate() {
            let c = column_mass[j] / total;
            let (a, cat) = schema.descriptor(j).expect("descriptor in range");
            let p = if s.values[a] == cat { 1.0 / total } else { 0.0 };
            residual[i * m + k] = (p - row_mass * c) / libm::sqrt(row_mass * c);
        }
    }

    let mut gram = vec![0.0; m * m];
    for a in 0..m {
        for b in a..m {
            let v: f64 = (0..n).map(|i| residual[i * m + a] * residual[i * m + b]).sum();
            gram[a * m + b] = v;
            gram[b * m + a] = v;
        }
    }
    let eig = jacobi_eigen(&gram, m);
    let inertia: f64 = eig.values.iter().map(|v| v.max(0.0)).sum();
    let rank = eig
        .values
        .iter()
        .filter(|&&v| v > 1e-12 * inertia.max(f64::MIN_POSITIVE))
        .count();

    let mut positions = vec![[0.0; 2]; n];
    let scale = 1.0 / libm::sqrt(row_mass);
    for axis in 0..rank.min(2) {
        let singular = libm::sqrt(eig.values[axis]);
        let v = &eig.vectors[axis];
        let mut coords: Vec<f64> = (0..n)
            .map(|i| {
                let u: f64 = (0..m).map(|k| residual[i * m + k] * v[k]).sum::<f64>() / singular;
                u * scale
            })
            .collect();
        orient_axis(&mut coords);
        for (p, c) in positions.iter_mut().zip(coords) {
            p[axis] = c;
        }
    }

    let mut layout = Layout::from_positions(positions, Method::Mca);
    layout.degenerate = rank < 2;
    Ok(layout)
}

fn orient_axis(coords: &mut [f64]) {
    let max = coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    // first entry within rounding of the largest magnitude decides the sign
    if let Some(lead) = coords.iter().find(|c| c.abs() >= max * (1.0 - 1e-9)) {
        if *lead < 0.0 {
            coords.iter_mut().for_each(|c| *c = -*c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::Point;
    use crate::dataset::{deduplicate, CategoricalTable, TableOptions};

    // subsets carry equal row mass, so the weighted mean is the plain mean
    fn weighted_mean(points: &[Point]) -> Point {
        let n = points.len() as f64;
        [
            points.iter().map(|p| p[0]).sum::<f64>() / n,
            points.iter().map(|p| p[1]).sum::<f64>() / n,
        ]
    }

    fn table(rows: &[&[&str]], header: &[&str]) -> SubsetTable {
        let records = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (i + 2, r.to_vec()));
        deduplicate(&CategoricalTable::from_records(header, records, &TableOptions::default()).unwrap())
    }

    #[test]
    fn rows_are_centered_and_standardized() {
        let s = table(
            &[
                &["a", "x", "p"],
                &["a", "y", "p"],
                &["b", "y", "q"],
                &["b", "x", "r"],
                &["c", "x", "q"],
            ],
            &["A1", "A2", "A3"],
        );
        let l = mca_project(&s).unwrap();
        let mean = weighted_mean(&l.positions);
        assert!(mean[0].abs() < 1e-12 && mean[1].abs() < 1e-12);
        // standard coordinates have unit weighted variance
        for axis in 0..2 {
            let var: f64 = l.positions.iter().map(|p| p[axis] * p[axis]).sum::<f64>() / 5.0;
            assert!((var - 1.0).abs() < 1e-9, "axis {axis} variance {var}");
        }
        assert!(!l.degenerate);
    }

    #[test]
    fn single_binary_attribute_is_one_dimensional() {
        let s = table(&[&["a"], &["b"]], &["A"]);
        let l = mca_project(&s).unwrap();
        assert!(l.degenerate);
        assert!(l.positions.iter().all(|p| p[1] == 0.0));
        assert!((l.positions[0][0] + l.positions[1][0]).abs() < 1e-12);
        assert!((l.positions[0][0].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sign_convention_is_stable() {
        let s = table(
            &[&["a", "x"], &["a", "y"], &["b", "y"], &["c", "x"]],
            &["A1", "A2"],
        );
        let l = mca_project(&s).unwrap();
        for axis in 0..2 {
            let lead = l
                .positions
                .iter()
                .map(|p| p[axis])
                .fold(0.0f64, |m, c| if c.abs() > m.abs() + 1e-9 { c } else { m });
            assert!(lead >= 0.0);
        }
    }

    #[test]
    fn needs_two_subsets() {
        let s = table(&[&["a", "x"]], &["A1", "A2"]);
        assert!(mca_project(&s).is_err());
    }
}
