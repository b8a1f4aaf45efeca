//! Dense symmetric eigensolver by cyclic Jacobi rotations.
//!
//! Used as an independent reference in tests and diagnostics; it never
//! touches the sparse kernels.

use crate::sparse::SparseMatrix;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;
pub const MAX_DIM: usize = 200;

/// Full eigendecomposition: eigenvalues descending, `vectors[k]` pairs with
/// `values[k]`.
#[derive(Debug, Clone)]
pub struct DenseEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Eigendecomposition of the symmetric `n x n` row-major matrix `a`.
///
/// Sweeps until the off-diagonal Frobenius mass falls below `1e-12` times
/// the matrix's Frobenius norm (absolute `1e-12` for the zero matrix).
pub fn dense_eig_oracle(a: &[f64], n: usize) -> Result<DenseEigen> {
    if a.len() != n * n {
        return Err(Error::dims("dense_eig_oracle", n * n, a.len()));
    }
    if n > MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "dense oracle limited to dimension {MAX_DIM}, got {n}"
        )));
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            asym = asym.max((a[i * n + j] - a[j * n + i]).abs());
        }
    }
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric(asym));
    }

    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = if frob > 0.0 { 1e-12 * frob } else { 1e-12 };

    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j] * m[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&m) >= target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NumericalBreakdown(
                "Jacobi sweeps did not converge".into(),
            ));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (m[p * n + p], m[q * n + q]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].total_cmp(&m[i * n + i]));
    Ok(DenseEigen {
        values: order.iter().map(|&k| m[k * n + k]).collect(),
        vectors: order
            .iter()
            .map(|&k| (0..n).map(|i| v[i * n + k]).collect())
            .collect(),
    })
}

/// Dense row-major `X Xᵀ`, or `(X - mu 1ᵀ)(X - mu 1ᵀ)ᵀ` when `center` is
/// given.
pub fn dense_covariance(x: &SparseMatrix, center: Option<&[f64]>) -> Vec<f64> {
    let (m, n) = (x.rows(), x.cols());
    let mut d = x.to_dense();
    if let Some(mu) = center {
        for i in 0..m {
            for j in 0..n {
                d[i * n + j] -= mu[i];
            }
        }
    }
    let mut a = vec![0.0; m * m];
    for i in 0..m {
        for k in 0..=i {
            let s: f64 = (0..n).map(|j| d[i * n + j] * d[k * n + j]).sum();
            a[i * m + k] = s;
            a[k * m + i] = s;
        }
    }
    a
}

/// Dense row-major matrix-vector product.
pub fn dense_matvec(a: &[f64], n: usize, v: &[f64]) -> Vec<f64> {
    (0..n)
        .map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        let e = dense_eig_oracle(&[1.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 2.0], 3).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        assert_eq!(e.vectors[0], vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn two_by_two() {
        let e = dense_eig_oracle(&[2.0, 1.0, 1.0, 2.0], 2).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.vectors[0][0].abs() - r).abs() < 1e-14);
        assert!((e.vectors[0][0] - e.vectors[0][1]).abs() < 1e-14);
        assert!((e.vectors[1][0] + e.vectors[1][1]).abs() < 1e-14);
    }

    #[test]
    fn random_self_consistency() {
        let n = 10;
        let mut a = vec![0.0; n * n];
        let mut state = 12345u64;
        for i in 0..n {
            for j in 0..=i {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let x = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        let e = dense_eig_oracle(&a, n).unwrap();
        for (lambda, v) in e.values.iter().zip(&e.vectors) {
            let av = dense_matvec(&a, n, v);
            for (x, y) in av.iter().zip(v) {
                assert!((x - lambda * y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn asymmetric_rejected() {
        assert!(matches!(
            dense_eig_oracle(&[1.0, 2.0, 0.0, 1.0], 2),
            Err(Error::NotSymmetric(_))
        ));
    }
}
