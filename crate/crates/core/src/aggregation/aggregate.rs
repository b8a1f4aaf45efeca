use super::Clustering;
use crate::sparse::SparseMatrix;
use crate::{Error, Result};

/// Coarse matrix `X₀` (one averaged column per cluster) and the clustering
/// that produced it.
#[derive(Debug, Clone)]
pub struct AggregateMatrix {
    pub x0: SparseMatrix,
    pub source_clustering: Clustering,
}

impl AggregateMatrix {
    /// Per-apply cost ratio `n / n₀` between the fine and coarse operators.
    pub fn cost_ratio(&self) -> f64 {
        self.source_clustering.assignment.len() as f64 / self.x0.cols() as f64
    }
}

/// Column `c` of `X₀` is the mean of the raw columns of `x` in cluster `c`;
/// its pattern is the union of the member patterns.
pub fn build_aggregate(x: &SparseMatrix, clustering: &Clustering) -> Result<AggregateMatrix> {
    if clustering.assignment.len() != x.cols() {
        return Err(Error::dims(
            "build_aggregate",
            x.cols(),
            clustering.assignment.len(),
        ));
    }
    let k = clustering.k;
    let mut entries: Vec<Vec<(usize, f64)>> = vec![Vec::new(); k];
    for (j, &c) in clustering.assignment.iter().enumerate() {
        let (idx, vals) = x.column(j);
        entries[c].extend(idx.iter().copied().zip(vals.iter().copied()));
    }
    let columns = entries
        .into_iter()
        .zip(&clustering.dims)
        .map(|(mut e, &dim)| {
            // Stable sort keeps member order within a row, so sums are
            // reproducible.
            e.sort_by_key(|&(i, _)| i);
            let inv = 1.0 / dim as f64;
            let mut merged: Vec<(usize, f64)> = Vec::new();
            for (i, v) in e {
                match merged.last_mut() {
                    Some((last, acc)) if *last == i => *acc += v,
                    _ => merged.push((i, v)),
                }
            }
            merged.iter_mut().for_each(|(_, v)| *v *= inv);
            merged
        })
        .collect();
    Ok(AggregateMatrix {
        x0: SparseMatrix::from_columns(x.rows(), columns)?,
        source_clustering: clustering.clone(),
    })
}
