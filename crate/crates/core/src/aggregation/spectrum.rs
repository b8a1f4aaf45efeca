use std::sync::Arc;

use crate::eigensolver::{coarse_operator, power_subspace, AlphaMode, SolverConfig};
use crate::sparse::{CovarianceOperator, SparseMatrix};
use crate::{Error, Result};

/// Residual tolerance for spectrum comparison, relative to `max(1, |X|²_F)`.
pub const SPECTRUM_TOL: f64 = 1e-8;
pub const SPECTRUM_MAX_ITER: usize = 5000;

/// Leading eigenvalues of the fine and coarse covariances, both descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumComparison {
    pub original: Vec<f64>,
    pub aggregated: Vec<f64>,
}

/// Computes the top `top_k` eigenvalues of `A = X Xᵀ` and `A₀ = X₀ X₀ᵀ`
/// with plain subspace iteration run to a tight residual.
pub fn spectrum_compare(
    x: impl Into<Arc<SparseMatrix>>,
    x0: impl Into<Arc<SparseMatrix>>,
    top_k: usize,
    seed: u64,
    centering: bool,
) -> Result<SpectrumComparison> {
    let (x, x0) = (x.into(), x0.into());
    let limit = x.rows().min(x.cols()).min(x0.cols());
    if top_k == 0 || top_k > limit {
        return Err(Error::InvalidArgument(format!(
            "top_k = {top_k} must lie in 1..={limit}"
        )));
    }
    let fine = CovarianceOperator::with_centering(Arc::clone(&x), centering);
    let coarse = coarse_operator(Arc::clone(&x0), &fine)?;
    let solve = |op: &CovarianceOperator, scale: f64| -> Result<Vec<f64>> {
        let cfg = SolverConfig {
            l: top_k,
            k_coarse: top_k,
            max_iter: SPECTRUM_MAX_ITER,
            tol_error1: SPECTRUM_TOL,
            tol_error2: SPECTRUM_TOL * scale.max(1.0),
            alpha_mode: AlphaMode::Off,
            seed,
            centering,
            ..SolverConfig::default()
        };
        let sol = power_subspace(op, &cfg)?;
        if !sol.trace.converged {
            return Err(Error::NoConvergence {
                iterations: sol.trace.iterations(),
                best_residual: sol.trace.best_residual(),
            });
        }
        Ok(sol.spectrum.lambdas)
    };
    Ok(SpectrumComparison {
        original: solve(&fine, x.frobenius_sq())?,
        aggregated: solve(&coarse, x0.frobenius_sq())?,
    })
}
