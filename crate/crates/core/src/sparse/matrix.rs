use std::thread;

use crate::{Error, Result};

/// Compressed-column sparse matrix. Rows are terms, columns are documents.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from raw compressed-column arrays, checking every
    /// structural invariant.
    pub fn from_parts(
        rows: usize,
        cols: usize,
        col_ptr: Vec<usize>,
        row_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if col_ptr.len() != cols + 1 {
            return Err(Error::InvalidMatrix(format!(
                "col_ptr has length {}, expected {}",
                col_ptr.len(),
                cols + 1
            )));
        }
        if col_ptr[0] != 0 {
            return Err(Error::InvalidMatrix("col_ptr[0] must be 0".into()));
        }
        if row_idx.len() != values.len() {
            return Err(Error::InvalidMatrix(format!(
                "{} row indices but {} values",
                row_idx.len(),
                values.len()
            )));
        }
        if col_ptr[cols] != values.len() {
            return Err(Error::InvalidMatrix(format!(
                "col_ptr[n] = {} but nnz = {}",
                col_ptr[cols],
                values.len()
            )));
        }
        for j in 0..cols {
            let (start, end) = (col_ptr[j], col_ptr[j + 1]);
            if start > end {
                return Err(Error::InvalidMatrix(format!(
                    "col_ptr decreases at column {j}"
                )));
            }
            let col = &row_idx[start..end];
            for (k, &i) in col.iter().enumerate() {
                if i >= rows {
                    return Err(Error::InvalidMatrix(format!(
                        "row index {i} out of range in column {j}"
                    )));
                }
                if k > 0 && col[k - 1] >= i {
                    return Err(Error::InvalidMatrix(format!(
                        "row indices not strictly increasing in column {j}"
                    )));
                }
            }
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite value at stored position {pos}"
            )));
        }
        Ok(SparseMatrix {
            rows,
            cols,
            col_ptr,
            row_idx,
            values,
        })
    }

    /// Builds a matrix from per-column `(row, value)` lists. Entries inside a
    /// column may come in any order; duplicates are rejected and explicit
    /// zeros are dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let cols = columns.len();
        let mut col_ptr = Vec::with_capacity(cols + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for (j, mut col) in columns.into_iter().enumerate() {
            col.sort_by_key(|&(i, _)| i);
            for w in col.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::InvalidMatrix(format!(
                        "duplicate entry ({}, {j})",
                        w[0].0
                    )));
                }
            }
            for (i, v) in col {
                if v != 0.0 {
                    row_idx.push(i);
                    values.push(v);
                }
            }
            col_ptr.push(values.len());
        }
        Self::from_parts(rows, cols, col_ptr, row_idx, values)
    }

    /// Builds a matrix from a row-major dense array, keeping the nonzeros.
    pub fn from_dense(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims("from_dense", rows * cols, data.len()));
        }
        let columns = (0..cols)
            .map(|j| (0..rows).map(|i| (i, data[i * cols + j])).collect())
            .collect();
        Self::from_columns(rows, columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Row indices and values stored in column `j`.
    pub fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        (&self.row_idx[range.clone()], &self.values[range])
    }

    /// Iterates `(row, col, value)` over stored entries in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.cols).flat_map(move |j| {
            let (idx, vals) = self.column(j);
            idx.iter().zip(vals).map(move |(&i, &v)| (i, j, v))
        })
    }

    /// Row-major dense copy. Intended for tests and small diagnostics.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.rows * self.cols];
        for (i, j, v) in self.triplets() {
            out[i * self.cols + j] = v;
        }
        out
    }

    /// Squared Frobenius norm, equal to the trace of `X Xᵀ`.
    pub fn frobenius_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// `X v`.
    pub fn spmv(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.spmv_threads(v, 1)
    }

    /// `Xᵀ v`, read straight from the column layout.
    pub fn spmv_t(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.spmv_t_threads(v, 1)
    }

    /// `X v` split over up to `threads` column blocks. Each block scatters
    /// into a private accumulator and the partial sums are added in block
    /// order, so the result depends only on the thread count.
    pub fn spmv_threads(&self, v: &[f64], threads: usize) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::dims("spmv", self.cols, v.len()));
        }
        let blocks = self.column_blocks(threads);
        if blocks.len() <= 1 {
            let mut out = vec![0.0; self.rows];
            self.scatter_columns(0..self.cols, v, &mut out);
            return Ok(out);
        }
        let partials: Vec<Vec<f64>> = thread::scope(|s| {
            let handles: Vec<_> = blocks
                .iter()
                .map(|r| {
                    let r = r.clone();
                    s.spawn(move || {
                        let mut acc = vec![0.0; self.rows];
                        self.scatter_columns(r, v, &mut acc);
                        acc
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut iter = partials.into_iter();
        let mut out = iter.next().unwrap();
        for p in iter {
            for (o, x) in out.iter_mut().zip(p) {
                *o += x;
            }
        }
        Ok(out)
    }

    /// `Xᵀ v` split over column blocks. Every output entry is a single
    /// column's dot product, so the result is identical for any thread count.
    pub fn spmv_t_threads(&self, v: &[f64], threads: usize) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return Err(Error::dims("spmv_t", self.rows, v.len()));
        }
        let mut out = vec![0.0; self.cols];
        let blocks = self.column_blocks(threads);
        if blocks.len() <= 1 {
            self.gather_columns(0, v, &mut out);
            return Ok(out);
        }
        thread::scope(|s| {
            let mut rest = out.as_mut_slice();
            for r in &blocks {
                let (head, tail) = rest.split_at_mut(r.len());
                rest = tail;
                let start = r.start;
                s.spawn(move || self.gather_columns(start, v, head));
            }
        });
        Ok(out)
    }

    fn scatter_columns(&self, cols: std::ops::Range<usize>, v: &[f64], out: &mut [f64]) {
        for j in cols {
            let vj = v[j];
            if vj == 0.0 {
                continue;
            }
            let (idx, vals) = self.column(j);
            for (&i, &x) in idx.iter().zip(vals) {
                out[i] += x * vj;
            }
        }
    }

    fn gather_columns(&self, first: usize, v: &[f64], out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate() {
            let (idx, vals) = self.column(first + k);
            *o = idx.iter().zip(vals).map(|(&i, &x)| x * v[i]).sum();
        }
    }

    fn column_blocks(&self, threads: usize) -> Vec<std::ops::Range<usize>> {
        let threads = threads.max(1).min(self.cols.max(1));
        if threads == 1 {
            return std::iter::once(0..self.cols).collect();
        }
        let chunk = self.cols.div_ceil(threads);
        (0..threads)
            .map(|t| (t * chunk).min(self.cols)..((t + 1) * chunk).min(self.cols))
            .filter(|r| !r.is_empty())
            .collect()
    }
}
