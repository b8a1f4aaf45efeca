use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::alpha::alpha_compute;
use super::metrics::{rayleigh_with, residual_sq};
use super::{AlphaMode, IterationTrace, ProjectorSet, SolverConfig, SpectrumApprox, TraceRow};
use crate::sparse::vector::{axpy, dot, is_finite, norm, orthonormalize, scale};
use crate::sparse::CovarianceOperator;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Solution {
    pub spectrum: SpectrumApprox,
    pub trace: IterationTrace,
}

/// Seeded starting block: `l` vectors of length `dim` with entries uniform
/// in `[-1, 1)`, orthonormalized.
pub fn random_start(dim: usize, l: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if l > dim {
        return Err(Error::InvalidArgument(format!(
            "cannot seek {l} eigenpairs of a dimension-{dim} operator"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut block: Vec<Vec<f64>> = (0..l)
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    orthonormalize(&mut block, seed)?;
    Ok(block)
}

/// Plain block power iteration from a seeded random start.
pub fn power_subspace(op: &CovarianceOperator, cfg: &SolverConfig) -> Result<Solution> {
    let start = random_start(op.dim(), cfg.l, cfg.seed)?;
    power_subspace_from(op, cfg, start)
}

pub fn power_subspace_from(
    op: &CovarianceOperator,
    cfg: &SolverConfig,
    start: Vec<Vec<f64>>,
) -> Result<Solution> {
    iterate(op, cfg, start, None)
}

/// Block power iteration with the projector term `alpha_i P_i A P_i u_i`
/// added to each `A u_i`. Direction `i` of `proj` accelerates iterate `i`.
pub fn accelerated_subspace(
    op: &CovarianceOperator,
    proj: &ProjectorSet,
    cfg: &SolverConfig,
) -> Result<Solution> {
    let start = random_start(op.dim(), cfg.l, cfg.seed)?;
    accelerated_subspace_from(op, proj, cfg, start)
}

pub fn accelerated_subspace_from(
    op: &CovarianceOperator,
    proj: &ProjectorSet,
    cfg: &SolverConfig,
    start: Vec<Vec<f64>>,
) -> Result<Solution> {
    if cfg.alpha_mode != AlphaMode::Off {
        if proj.len() < start.len() {
            return Err(Error::InvalidArgument(format!(
                "{} projectors for {} iterates",
                proj.len(),
                start.len()
            )));
        }
        if let Some(p) = proj.projectors.iter().find(|p| p.q.len() != op.dim()) {
            return Err(Error::dims("accelerated_subspace", op.dim(), p.q.len()));
        }
    }
    iterate(op, cfg, start, Some(proj))
}

fn iterate(
    op: &CovarianceOperator,
    cfg: &SolverConfig,
    mut u: Vec<Vec<f64>>,
    proj: Option<&ProjectorSet>,
) -> Result<Solution> {
    cfg.validate()?;
    let l = u.len();
    let dim = op.dim();
    if l == 0 || l > dim {
        return Err(Error::InvalidArgument(format!(
            "cannot seek {l} eigenpairs of a dimension-{dim} operator"
        )));
    }
    if let Some(v) = u.iter().find(|v| v.len() != dim) {
        return Err(Error::dims("start block", dim, v.len()));
    }
    let proj = proj.filter(|_| cfg.alpha_mode != AlphaMode::Off);

    orthonormalize(&mut u, cfg.seed)?;
    let mut au = apply_block(op, &u)?;
    let mut lambdas: Vec<f64> = u
        .iter()
        .zip(&au)
        .map(|(x, ax)| rayleigh_with(x, ax))
        .collect();
    let mut residuals: Vec<f64> = residual_norms(&u, &au, &lambdas);
    let mut retired = vec![false; l];
    let mut best = residuals.clone();
    let mut since_best = vec![0usize; l];
    let mut trace = IterationTrace::default();

    for it in 1..=cfg.max_iter {
        let started = Instant::now();
        let mut alphas = vec![0.0; l];
        let mut next = Vec::with_capacity(l);
        for i in 0..l {
            let mut b = au[i].clone();
            if let Some(set) = proj.filter(|_| !retired[i]) {
                let p = &set.projectors[i];
                let a2u = match cfg.alpha_mode {
                    AlphaMode::Normalized => Some(op.apply(&au[i])?),
                    _ => None,
                };
                let alpha = alpha_compute(
                    &u[i],
                    &au[i],
                    a2u.as_deref(),
                    p,
                    lambdas[i],
                    cfg.alpha_mode,
                    cfg.alpha_cap,
                );
                if alpha != 0.0 {
                    let c = dot(&p.q, &u[i]);
                    axpy(alpha * p.s * c, &p.q, &mut b);
                }
                alphas[i] = alpha;
            }
            let nb = norm(&b);
            if !nb.is_finite() {
                return Err(Error::NumericalBreakdown(format!(
                    "non-finite iterate {i} at iteration {it}"
                )));
            }
            // A zero image is left for orthonormalize to replace.
            if nb > 0.0 {
                scale(1.0 / nb, &mut b);
            }
            next.push(b);
        }
        orthonormalize(&mut next, cfg.seed.wrapping_add(it as u64))?;
        u = next;
        au = apply_block(op, &u)?;
        let current: Vec<f64> = u
            .iter()
            .zip(&au)
            .map(|(x, ax)| rayleigh_with(x, ax))
            .collect();
        if !is_finite(&current) {
            return Err(Error::NumericalBreakdown(format!(
                "non-finite eigenvalue estimate at iteration {it}"
            )));
        }
        let error1 = relative_change(&lambdas, &current);
        residuals = residual_norms(&u, &au, &current);
        for i in 0..l {
            if residuals[i] < best[i] {
                best[i] = residuals[i];
                since_best[i] = 0;
            } else {
                since_best[i] += 1;
                if cfg.retire_patience > 0 && since_best[i] >= cfg.retire_patience {
                    retired[i] = true;
                }
            }
        }
        let error2 = residuals.iter().map(|r| r * r).sum::<f64>().sqrt();
        lambdas = current;
        trace.rows.push(TraceRow {
            iter: it,
            lambdas: lambdas.clone(),
            error1,
            error2,
            alphas,
            wall_time: started.elapsed(),
        });
        if error1 < cfg.tol_error1 && error2 < cfg.tol_error2 {
            trace.converged = true;
            break;
        }
    }

    let mut spectrum = SpectrumApprox {
        lambdas,
        vectors: u,
    };
    spectrum.sort_descending();
    Ok(Solution { spectrum, trace })
}

fn residual_norms(u: &[Vec<f64>], au: &[Vec<f64>], lambdas: &[f64]) -> Vec<f64> {
    u.iter()
        .zip(au)
        .zip(lambdas)
        .map(|((x, ax), &lam)| residual_sq(x, ax, lam).sqrt())
        .collect()
}

fn apply_block(op: &CovarianceOperator, u: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let out = u.iter().map(|v| op.apply(v)).collect::<Result<Vec<_>>>()?;
    if out.iter().any(|v| !is_finite(v)) {
        return Err(Error::NumericalBreakdown(
            "non-finite operator image".into(),
        ));
    }
    Ok(out)
}

/// Error₁ with the all-zero previous estimate mapped to 0 (no change) or
/// infinity, so that a rank-deficient start cannot abort the run.
fn relative_change(prev: &[f64], curr: &[f64]) -> f64 {
    let denom = norm(prev);
    let diff: f64 = prev
        .iter()
        .zip(curr)
        .map(|(p, c)| (c - p).powi(2))
        .sum::<f64>()
        .sqrt();
    if denom > 0.0 {
        diff / denom
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}
