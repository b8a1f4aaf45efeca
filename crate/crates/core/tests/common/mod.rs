#![allow(dead_code)]

use aggpca::sparse::SparseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random non-negative integer counts with the given fill probability.
/// Every column gets at least one entry.
pub fn random_counts(rng: &mut ChaCha8Rng, m: usize, n: usize, density: f64) -> SparseMatrix {
    let columns = (0..n)
        .map(|_| {
            let mut col = Vec::new();
            for i in 0..m {
                if rng.random::<f64>() < density {
                    col.push((i, rng.random_range(1..6) as f64));
                }
            }
            if col.is_empty() {
                col.push((rng.random_range(0..m), 1.0));
            }
            col
        })
        .collect();
    SparseMatrix::from_columns(m, columns).unwrap()
}

/// Random real entries of either sign.
pub fn random_real(rng: &mut ChaCha8Rng, m: usize, n: usize, density: f64) -> SparseMatrix {
    let columns = (0..n)
        .map(|_| {
            let mut col = Vec::new();
            for i in 0..m {
                if rng.random::<f64>() < density {
                    col.push((i, rng.random_range(-10.0..10.0)));
                }
            }
            col
        })
        .collect();
    SparseMatrix::from_columns(m, columns).unwrap()
}

pub fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / norm).collect()
}

pub fn matvec(a: &[f64], n: usize, v: &[f64]) -> Vec<f64> {
    (0..n)
        .map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum())
        .collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `|A u - λ u|`
pub fn residual(a: &[f64], n: usize, u: &[f64], lambda: f64) -> f64 {
    let au = matvec(a, n, u);
    au.iter()
        .zip(u)
        .map(|(x, y)| (x - lambda * y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Random orthogonal `n x n` matrix, returned as its columns.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> = (0..n).map(|_| unit_vector(rng, n)).collect();
    aggpca::sparse::orthonormalize(&mut cols, 1).unwrap();
    cols
}

/// Random clustering of `n` items into `k` non-empty clusters.
pub fn random_assignment(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut a: Vec<usize> = (0..n)
        .map(|j| if j < k { j } else { rng.random_range(0..k) })
        .collect();
    for i in (1..n).rev() {
        a.swap(i, rng.random_range(0..=i));
    }
    a
}
