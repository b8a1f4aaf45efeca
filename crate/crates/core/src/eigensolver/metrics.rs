use super::SpectrumApprox;
use crate::sparse::vector::{dot, norm};
use crate::sparse::CovarianceOperator;
use crate::{Error, Result};

/// Rayleigh quotient `(Au, u) / (u, u)`.
pub fn rayleigh(op: &CovarianceOperator, u: &[f64]) -> Result<f64> {
    let uu = dot(u, u);
    if uu == 0.0 {
        return Err(Error::ZeroVector("rayleigh"));
    }
    Ok(dot(&op.apply(u)?, u) / uu)
}

pub(crate) fn rayleigh_with(u: &[f64], au: &[f64]) -> f64 {
    dot(au, u) / dot(u, u)
}

/// Relative Frobenius change `|Λ_curr - Λ_prev| / |Λ_prev|` of diagonal
/// eigenvalue matrices.
pub fn error1(prev: &[f64], curr: &[f64]) -> Result<f64> {
    if prev.len() != curr.len() {
        return Err(Error::dims("error1", prev.len(), curr.len()));
    }
    let denom = norm(prev);
    if denom == 0.0 {
        return Err(Error::InvalidArgument(
            "error1: previous eigenvalue estimates are all zero".into(),
        ));
    }
    let diff: f64 = prev.iter().zip(curr).map(|(p, c)| (c - p).powi(2)).sum();
    Ok(diff.sqrt() / denom)
}

/// Block residual `|A U - U Λ|_F`. Applies the operator once per vector.
pub fn error2(op: &CovarianceOperator, spectrum: &SpectrumApprox) -> Result<f64> {
    let mut total = 0.0;
    for (u, &lambda) in spectrum.vectors.iter().zip(&spectrum.lambdas) {
        let au = op.apply(u)?;
        total += residual_sq(u, &au, lambda);
    }
    Ok(total.sqrt())
}

pub(crate) fn residual_sq(u: &[f64], au: &[f64], lambda: f64) -> f64 {
    au.iter()
        .zip(u)
        .map(|(a, x)| (a - lambda * x).powi(2))
        .sum()
}
