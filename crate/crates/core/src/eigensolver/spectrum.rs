use std::time::Duration;

/// Eigenvalue estimates (descending) and their orthonormal vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumApprox {
    pub lambdas: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl SpectrumApprox {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Reorders the pairs by descending eigenvalue.
    pub(crate) fn sort_descending(&mut self) {
        let mut order: Vec<usize> = (0..self.lambdas.len()).collect();
        order.sort_by(|&a, &b| self.lambdas[b].total_cmp(&self.lambdas[a]));
        self.lambdas = order.iter().map(|&k| self.lambdas[k]).collect();
        self.vectors = order
            .iter()
            .map(|&k| std::mem::take(&mut self.vectors[k]))
            .collect();
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    /// 1-based iteration number; the row describes the iterate produced by
    /// this many updates.
    pub iter: usize,
    pub lambdas: Vec<f64>,
    pub error1: f64,
    pub error2: f64,
    /// Projector weights used in the update that produced this iterate.
    pub alphas: Vec<f64>,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub rows: Vec<TraceRow>,
    pub converged: bool,
}

impl IterationTrace {
    pub fn iterations(&self) -> usize {
        self.rows.len()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// First iteration whose residual is at most `tol`.
    pub fn iterations_to_residual(&self, tol: f64) -> Option<usize> {
        self.rows.iter().find(|r| r.error2 <= tol).map(|r| r.iter)
    }

    pub fn best_residual(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.error2)
            .fold(f64::INFINITY, f64::min)
    }

    /// Trace equality ignoring wall-clock times.
    pub fn same_numbers(&self, other: &IterationTrace) -> bool {
        self.converged == other.converged
            && self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| {
                a.iter == b.iter
                    && bits(&a.lambdas) == bits(&b.lambdas)
                    && a.error1.to_bits() == b.error1.to_bits()
                    && a.error2.to_bits() == b.error2.to_bits()
                    && bits(&a.alphas) == bits(&b.alphas)
            })
    }
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}
