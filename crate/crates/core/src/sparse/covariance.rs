use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;

use super::vector::dot;
use super::SparseMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone)]
enum Centering {
    Off,
    /// Columns centered on their own mean `mu = X 1 / n`; uses the rank-one
    /// form `X Xᵀ v - n (mu·v) mu`.
    OwnMean {
        mu: Vec<f64>,
    },
    /// Columns centered on an external vector `c`; `col_sum = X 1`.
    External {
        center: Vec<f64>,
        col_sum: Vec<f64>,
    },
}

/// Implicit covariance `A = X Xᵀ`, optionally centered, applied as
/// `X (Xᵀ v)` without forming `A`.
///
/// Every application bumps two counters: the number of applies and the
/// number of stored-value multiply-adds performed by the sparse kernels.
#[derive(Debug)]
pub struct CovarianceOperator {
    matrix: Arc<SparseMatrix>,
    centering: Centering,
    threads: usize,
    applies: AtomicUsize,
    madds: AtomicU64,
}

impl CovarianceOperator {
    pub fn new(matrix: impl Into<Arc<SparseMatrix>>) -> Self {
        Self::build(matrix.into(), Centering::Off)
    }

    /// Covariance of the columns centered on their mean.
    pub fn centered(matrix: impl Into<Arc<SparseMatrix>>) -> Self {
        let matrix = matrix.into();
        let n = matrix.cols();
        let mut mu = column_sum(&matrix);
        if n > 0 {
            for m in &mut mu {
                *m /= n as f64;
            }
        }
        Self::build(matrix, Centering::OwnMean { mu })
    }

    /// Covariance of the columns centered on `center`, which need not be
    /// their own mean. Used for the coarse model of a centered problem,
    /// where the cluster averages are shifted by the fine-level mean.
    pub fn centered_on(matrix: impl Into<Arc<SparseMatrix>>, center: Vec<f64>) -> Result<Self> {
        let matrix = matrix.into();
        if center.len() != matrix.rows() {
            return Err(Error::dims("centered_on", matrix.rows(), center.len()));
        }
        let col_sum = column_sum(&matrix);
        Ok(Self::build(matrix, Centering::External { center, col_sum }))
    }

    pub fn with_centering(matrix: impl Into<Arc<SparseMatrix>>, centering: bool) -> Self {
        if centering {
            Self::centered(matrix)
        } else {
            Self::new(matrix)
        }
    }

    fn build(matrix: Arc<SparseMatrix>, centering: Centering) -> Self {
        CovarianceOperator {
            matrix,
            centering,
            threads: 1,
            applies: AtomicUsize::new(0),
            madds: AtomicU64::new(0),
        }
    }

    /// Caps the kernel thread count. One thread is the default.
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn shared_matrix(&self) -> Arc<SparseMatrix> {
        Arc::clone(&self.matrix)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_centered(&self) -> bool {
        !matches!(self.centering, Centering::Off)
    }

    /// Mean vector when centered on the column mean, or the external center.
    pub fn center(&self) -> Option<&[f64]> {
        match &self.centering {
            Centering::Off => None,
            Centering::OwnMean { mu } => Some(mu),
            Centering::External { center, .. } => Some(center),
        }
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn apply_count(&self) -> usize {
        self.applies.load(Ordering::Relaxed)
    }

    pub fn madd_count(&self) -> u64 {
        self.madds.load(Ordering::Relaxed)
    }

    pub fn reset_counters(&self) {
        self.applies.store(0, Ordering::Relaxed);
        self.madds.store(0, Ordering::Relaxed);
    }

    /// `A v`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let x = &*self.matrix;
        if v.len() != x.rows() {
            return Err(Error::dims("cov_apply", x.rows(), v.len()));
        }
        let xtv = x.spmv_t_threads(v, self.threads)?;
        let mut out = x.spmv_threads(&xtv, self.threads)?;
        let mut madds = 2 * x.nnz() as u64;
        match &self.centering {
            Centering::Off => {}
            Centering::OwnMean { mu } => {
                let coef = x.cols() as f64 * dot(mu, v);
                for (o, m) in out.iter_mut().zip(mu) {
                    *o -= coef * m;
                }
                madds += 2 * x.rows() as u64;
            }
            Centering::External { center, col_sum } => {
                // (X - c1ᵀ)(X - c1ᵀ)ᵀ v = X Xᵀ v - s (c·v) - c (1ᵀ Xᵀ v) + n c (c·v)
                let cv = dot(center, v);
                let total: f64 = xtv.iter().sum();
                let n = x.cols() as f64;
                for ((o, s), c) in out.iter_mut().zip(col_sum).zip(center) {
                    *o += -s * cv - c * total + n * c * cv;
                }
                madds += 4 * x.rows() as u64 + x.cols() as u64;
            }
        }
        self.applies.fetch_add(1, Ordering::Relaxed);
        self.madds.fetch_add(madds, Ordering::Relaxed);
        Ok(out)
    }
}

fn column_sum(x: &SparseMatrix) -> Vec<f64> {
    let mut s = vec![0.0; x.rows()];
    for (i, _, v) in x.triplets() {
        s[i] += v;
    }
    s
}
