//! Coarse models of the document set.
//!
//! Documents are grouped by K-means; each group is replaced by the average
//! of its raw columns, giving an `m × n₀` matrix `X₀ = X R` whose covariance
//! `A₀ = X₀ X₀ᵀ` mimics the leading spectrum of `A = X Xᵀ`. The averaging
//! map `R` is never stored.

mod aggregate;
mod kmeans;
mod spectrum;

pub use aggregate::{build_aggregate, AggregateMatrix};
pub use kmeans::{kmeans, write_clustering_csv, Clustering, KMeansConfig};
pub use spectrum::{spectrum_compare, SpectrumComparison};
