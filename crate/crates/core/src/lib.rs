//! Aggregation-accelerated subspace iteration for principal component
//! analysis of sparse document-term matrices.
//!
//! The covariance matrix `A = X Xᵀ` of a term-frequency matrix `X` is never
//! formed. Its leading eigenpairs are found by block power iteration, and a
//! coarse model built from K-means cluster averages supplies rank-one
//! projectors that steer the iterates toward the dominant eigenvectors.
//!
//! Module map:
//!
//! * [`sparse`]: compressed-column storage, matrix-vector kernels, the
//!   implicit covariance operator and dense vector helpers.
//! * [`ingest`]: tokenization, term-frequency matrices and MatrixMarket I/O.
//! * [`aggregation`]: K-means clustering, coarse matrix construction and
//!   spectrum comparison.
//! * [`eigensolver`]: plain and accelerated subspace iteration, projector
//!   data, step-size rules, convergence metrics and a dense Jacobi oracle.
//! * [`synth`]: planted-topic corpus generator.
//! * [`cli`]: the `aggpca` command-line front end.
//!
//! Runnable walkthroughs for each capability live in the crate's
//! `examples/` directory.

pub mod aggregation;
pub mod cli;
pub mod eigensolver;
mod error;
pub mod ingest;
pub mod sparse;
pub mod synth;

pub use error::{Error, Result};
