//! Dense vector helpers and block orthonormalization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub type DenseVector = Vec<f64>;

/// Relative norm below which a projected vector counts as linearly dependent.
const RANK_TOL: f64 = 1e-12;
const MAX_REPAIRS: usize = 8;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    for xi in x {
        *xi *= alpha;
    }
}

pub fn is_finite(x: &[f64]) -> bool {
    x.iter().all(|v| v.is_finite())
}

/// Outcome of [`orthonormalize`]: indices of input vectors that were
/// linearly dependent on their predecessors and got replaced.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrthoReport {
    pub replaced: Vec<usize>,
}

impl OrthoReport {
    pub fn is_clean(&self) -> bool {
        self.replaced.is_empty()
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass, in place.
///
/// A vector whose norm after projection drops below `1e-12` times its
/// original norm is swapped for a pseudo-random vector drawn from a generator
/// seeded with `seed` and the vector index, then orthogonalized again.
pub fn orthonormalize(vectors: &mut [DenseVector], seed: u64) -> Result<OrthoReport> {
    let Some(len) = vectors.first().map(Vec::len) else {
        return Ok(OrthoReport::default());
    };
    if let Some(bad) = vectors.iter().find(|v| v.len() != len) {
        return Err(Error::dims("orthonormalize", len, bad.len()));
    }
    if vectors.len() > len {
        return Err(Error::InvalidArgument(format!(
            "cannot orthonormalize {} vectors of length {len}",
            vectors.len()
        )));
    }

    let mut report = OrthoReport::default();
    for k in 0..vectors.len() {
        let (done, rest) = vectors.split_at_mut(k);
        let v = &mut rest[0];
        let mut attempt = 0;
        loop {
            let original = norm(v);
            for _pass in 0..2 {
                for q in done.iter() {
                    let c = dot(q, v);
                    axpy(-c, q, v);
                }
            }
            let projected = norm(v);
            if original > 0.0 && projected >= RANK_TOL * original {
                scale(1.0 / projected, v);
                break;
            }
            if attempt == MAX_REPAIRS {
                return Err(Error::NumericalBreakdown(format!(
                    "could not complete orthonormal basis at vector {k}"
                )));
            }
            if attempt == 0 {
                report.replaced.push(k);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((k as u64) << 32) ^ attempt as u64);
            for x in v.iter_mut() {
                *x = rng.random_range(-1.0..1.0);
            }
            attempt += 1;
        }
    }
    Ok(report)
}
