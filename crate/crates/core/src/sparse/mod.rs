//! Sparse storage, kernels and the implicit covariance operator.

mod covariance;
mod matrix;
pub mod vector;

pub use covariance::CovarianceOperator;
pub use matrix::SparseMatrix;
pub use vector::{orthonormalize, DenseVector, OrthoReport};
