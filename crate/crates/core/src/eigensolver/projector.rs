use std::sync::Arc;

use super::dense::{dense_eig_oracle, MAX_DIM};
use super::{power_subspace, SolverConfig};
use crate::sparse::vector::{dot, orthonormalize};
use crate::sparse::{CovarianceOperator, SparseMatrix};
use crate::{Error, Result};

/// Residual target for the coarse solve, relative to `max(1, |X₀|²_F)`.
pub const COARSE_TOL: f64 = 1e-8;
pub const COARSE_MAX_ITER: usize = 500;

/// Data for one rank-one projector `P = q qᵀ`, evaluated against the fine
/// operator `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    pub q: Vec<f64>,
    /// `A q`
    pub w: Vec<f64>,
    /// `A² q`
    pub z: Vec<f64>,
    /// `qᵀ A q`
    pub s: f64,
    /// Eigenvalue of the coarse operator belonging to `q`.
    pub coarse_lambda: f64,
    /// Fine residual `|A q - s q|` of the coarse vector.
    pub residual: f64,
}

impl Projector {
    pub fn from_parts(q: Vec<f64>, w: Vec<f64>, z: Vec<f64>, coarse_lambda: f64) -> Self {
        let s = dot(&q, &w);
        let residual = w
            .iter()
            .zip(&q)
            .map(|(a, b)| (a - s * b).powi(2))
            .sum::<f64>()
            .sqrt();
        Projector {
            q,
            w,
            z,
            s,
            coarse_lambda,
            residual,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProjectorSet {
    pub projectors: Vec<Projector>,
}

impl ProjectorSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Precomputes `A q`, `A² q` and `qᵀ A q` for each unit vector `q`.
    /// Costs two applies of `fine` per vector.
    pub fn from_vectors(
        fine: &CovarianceOperator,
        qs: Vec<Vec<f64>>,
        coarse_lambdas: &[f64],
    ) -> Result<Self> {
        let projectors = qs
            .into_iter()
            .enumerate()
            .map(|(k, q)| {
                let w = fine.apply(&q)?;
                let z = fine.apply(&w)?;
                Ok(Projector::from_parts(
                    q,
                    w,
                    z,
                    coarse_lambdas.get(k).copied().unwrap_or(f64::NAN),
                ))
            })
            .collect::<Result<_>>()?;
        Ok(ProjectorSet { projectors })
    }

    /// Orders directions by descending `qᵀ A q`, the fine-level eigenvalue
    /// estimate of each coarse vector, so that direction `i` targets the
    /// `i`-th fine eigenpair.
    pub fn sort_by_fine_rayleigh(&mut self) {
        self.projectors.sort_by(|a, b| b.s.total_cmp(&a.s));
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Projector> {
        self.projectors.get(i)
    }
}

/// Coarse operator matching `fine`: plain `X₀ X₀ᵀ`, or centered on the fine
/// mean when `fine` is centered (averaging commutes with subtracting a
/// common vector from every column).
pub fn coarse_operator(
    x0: Arc<SparseMatrix>,
    fine: &CovarianceOperator,
) -> Result<CovarianceOperator> {
    let op = match fine.center() {
        Some(mu) => CovarianceOperator::centered_on(x0, mu.to_vec())?,
        None => CovarianceOperator::new(x0),
    };
    Ok(op.with_threads(fine.threads()))
}

/// Leading `k_coarse` eigenvectors of the coarse covariance, turned into
/// projector data against `fine`.
///
/// With at most [`MAX_DIM`] coarse columns the eigenvectors come from the
/// `n₀ x n₀` Gram matrix of the (shifted) coarse columns, solved densely.
/// Wider coarse models fall back to subspace iteration, run until the block
/// residual is below [`COARSE_TOL`] (relative to `max(1, |X₀|²_F)`) and the
/// relative eigenvalue change below the same tolerance, for at most
/// [`COARSE_MAX_ITER`] iterations.
pub fn solve_coarse(
    x0: impl Into<Arc<SparseMatrix>>,
    fine: &CovarianceOperator,
    k_coarse: usize,
    cfg: &SolverConfig,
) -> Result<ProjectorSet> {
    let x0 = x0.into();
    if k_coarse > x0.cols() {
        return Err(Error::InvalidArgument(format!(
            "k_coarse ({k_coarse}) exceeds the number of coarse columns ({})",
            x0.cols()
        )));
    }
    if x0.rows() != fine.dim() {
        return Err(Error::dims("solve_coarse", fine.dim(), x0.rows()));
    }
    let (vectors, lambdas) = if x0.cols() <= MAX_DIM {
        coarse_by_gram(&x0, fine.center(), k_coarse, cfg.seed)?
    } else {
        coarse_by_iteration(x0, fine, k_coarse, cfg)?
    };
    let mut set = ProjectorSet::from_vectors(fine, vectors, &lambdas)?;
    set.sort_by_fine_rayleigh();
    Ok(set)
}

/// With `Y = X₀ - c 1ᵀ` and `YᵀY = V Σ² Vᵀ`, the coarse eigenvectors are
/// `Y v_j / σ_j` with eigenvalues `σ_j²`.
fn coarse_by_gram(
    x0: &SparseMatrix,
    center: Option<&[f64]>,
    k: usize,
    seed: u64,
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let (m, n0) = (x0.rows(), x0.cols());
    let cols: Vec<Vec<f64>> = (0..n0)
        .map(|j| {
            let mut y = match center {
                Some(c) => c.iter().map(|v| -v).collect(),
                None => vec![0.0; m],
            };
            let (rows, vals) = x0.column(j);
            for (&i, &v) in rows.iter().zip(vals) {
                y[i] += v;
            }
            y
        })
        .collect();
    let mut gram = vec![0.0; n0 * n0];
    for a in 0..n0 {
        for b in 0..=a {
            let g = dot(&cols[a], &cols[b]);
            gram[a * n0 + b] = g;
            gram[b * n0 + a] = g;
        }
    }
    let eig = dense_eig_oracle(&gram, n0)?;
    let top = eig.values[0].max(0.0);
    let mut vectors = Vec::with_capacity(k);
    let mut lambdas = Vec::with_capacity(k);
    for j in 0..k {
        let lam = eig.values[j].max(0.0);
        let mut q = vec![0.0; m];
        // Directions with no coarse energy are left at zero and replaced
        // by seeded random vectors below.
        if lam > 1e-12 * top {
            let inv = 1.0 / lam.sqrt();
            for (a, col) in cols.iter().enumerate() {
                let coef = eig.vectors[j][a] * inv;
                for (qi, yi) in q.iter_mut().zip(col) {
                    *qi += coef * yi;
                }
            }
        }
        vectors.push(q);
        lambdas.push(lam);
    }
    orthonormalize(&mut vectors, seed)?;
    Ok((vectors, lambdas))
}

fn coarse_by_iteration(
    x0: Arc<SparseMatrix>,
    fine: &CovarianceOperator,
    k: usize,
    cfg: &SolverConfig,
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let scale = x0.frobenius_sq().max(1.0);
    let coarse = coarse_operator(x0, fine)?;
    let coarse_cfg = SolverConfig {
        l: k,
        k_coarse: k,
        max_iter: COARSE_MAX_ITER,
        tol_error1: COARSE_TOL,
        tol_error2: COARSE_TOL * scale,
        ..cfg.clone()
    };
    let solution = power_subspace(&coarse, &coarse_cfg)?;
    if !solution.trace.converged {
        return Err(Error::NoConvergence {
            iterations: solution.trace.iterations(),
            best_residual: solution.trace.best_residual(),
        });
    }
    Ok((solution.spectrum.vectors, solution.spectrum.lambdas))
}
