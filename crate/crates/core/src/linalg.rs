//! Small dense symmetric eigensolvers.

use alloc::vec;
use alloc::vec::Vec;

/// Eigen-decomposition of a symmetric matrix, eigenvalues sorted descending.
/// `vectors[k]` is the unit eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi rotations. `matrix` is row-major `n x n` and must be symmetric.
pub fn jacobi_eigen(matrix: &[f64], n: usize) -> SymmetricEigen {
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        if off <= 1e-30 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + libm::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]).then(i.cmp(&j)));
    SymmetricEigen {
        values: order.iter().map(|&i| a[i * n + i]).collect(),
        vectors: order
            .iter()
            .map(|&i| (0..n).map(|k| v[k * n + i]).collect())
            .collect(),
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn matvec(m: &[f64], n: usize, x: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = dot(&m[i * n..(i + 1) * n], x);
    }
}

/// Above this size the top eigenpairs come from subspace iteration instead of Jacobi.
const JACOBI_LIMIT: usize = 400;

/// The `k` algebraically largest eigenpairs of a symmetric matrix.
///
/// Small matrices use [`jacobi_eigen`]. Larger ones run shifted subspace
/// iteration with Rayleigh-Ritz, which is deterministic but only approximate.
pub fn top_eigenpairs(matrix: &[f64], n: usize, k: usize) -> SymmetricEigen {
    if n <= JACOBI_LIMIT {
        let mut e = jacobi_eigen(matrix, n);
        e.values.truncate(k);
        e.vectors.truncate(k);
        return e;
    }
    // Gershgorin shift makes the spectrum non-negative so the dominant
    // subspace is the algebraically largest one.
    let shift = (0..n)
        .map(|i| matrix[i * n..(i + 1) * n].iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            (0..n)
                .map(|i| {
                    // deterministic, non-degenerate start
                    let t = (i * (j + 3) + 7 * j) as f64;
                    libm::sin(t * 0.618_033_988_75 + j as f64) + 0.01 * (i % (j + 2)) as f64
                })
                .collect()
        })
        .collect();
    let mut tmp = vec![0.0; n];
    let mut prev = vec![f64::INFINITY; k];
    for _ in 0..2000 {
        for b in basis.iter_mut() {
            matvec(matrix, n, b, &mut tmp);
            for (x, t) in b.iter_mut().zip(&tmp) {
                *x = t + shift * *x;
            }
        }
        orthonormalize(&mut basis);
        // Rayleigh quotients for convergence
        let mut done = true;
        for (j, b) in basis.iter().enumerate() {
            matvec(matrix, n, b, &mut tmp);
            let rq = dot(b, &tmp);
            if (rq - prev[j]).abs() > 1e-12 * (1.0 + rq.abs()) {
                done = false;
            }
            prev[j] = rq;
        }
        if done {
            break;
        }
    }
    // Rayleigh-Ritz on the converged subspace
    let mut small = vec![0.0; k * k];
    let projected: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| {
            let mut out = vec![0.0; n];
            matvec(matrix, n, b, &mut out);
            out
        })
        .collect();
    for i in 0..k {
        for j in 0..k {
            small[i * k + j] = dot(&basis[i], &projected[j]);
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            let avg = 0.5 * (small[i * k + j] + small[j * k + i]);
            small[i * k + j] = avg;
            small[j * k + i] = avg;
        }
    }
    let ritz = jacobi_eigen(&small, k);
    let vectors = ritz
        .vectors
        .iter()
        .map(|coef| {
            let mut v = vec![0.0; n];
            for (c, b) in coef.iter().zip(&basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            v
        })
        .collect();
    SymmetricEigen {
        values: ritz.values,
        vectors,
    }
}

fn orthonormalize(basis: &mut [Vec<f64>]) {
    for j in 0..basis.len() {
        let (done, rest) = basis.split_at_mut(j);
        let b = &mut rest[0];
        for _ in 0..2 {
            for q in done.iter() {
                let c = dot(b, q);
                for (x, y) in b.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let norm = libm::sqrt(dot(b, b));
        if norm > 0.0 {
            b.iter_mut().for_each(|x| *x /= norm);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalizes_small_matrix() {
        // eigenvalues of [[2,1],[1,2]] are 3 and 1
        let e = jacobi_eigen(&[2.0, 1.0, 1.0, 2.0], 2);
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let v = &e.vectors[0];
        assert!((v[0].abs() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_random_symmetric() {
        let n = 7;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = libm::sin((i * 13 + j * 7) as f64);
                m[i * n + j] = v;
                m[j * n + i] = v;
            }
        }
        let e = jacobi_eigen(&m, n);
        for i in 0..n {
            for j in 0..n {
                let r: f64 = (0..n)
                    .map(|k| e.values[k] * e.vectors[k][i] * e.vectors[k][j])
                    .sum();
                assert!((r - m[i * n + j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn subspace_iteration_matches_jacobi() {
        let n = JACOBI_LIMIT + 20;
        // low-rank plus noise, with a clear gap after the second eigenvalue
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let u = libm::cos(i as f64 * 0.05);
                let w = libm::sin(i as f64 * 0.11) * libm::sin(j as f64 * 0.11);
                m[i * n + j] = 3.0 * u * libm::cos(j as f64 * 0.05) + 2.0 * w;
            }
        }
        for i in 0..n {
            for j in 0..i {
                let avg = 0.5 * (m[i * n + j] + m[j * n + i]);
                m[i * n + j] = avg;
                m[j * n + i] = avg;
            }
        }
        let fast = top_eigenpairs(&m, n, 2);
        let exact = jacobi_eigen(&m, n);
        for k in 0..2 {
            assert!((fast.values[k] - exact.values[k]).abs() < 1e-6 * exact.values[0]);
            let c = dot(&fast.vectors[k], &exact.vectors[k]).abs();
            assert!((c - 1.0).abs() < 1e-6);
        }
    }
}
