//! Subspace iteration, plain and aggregation-accelerated.
//!
//! The plain method repeats `u_i <- A u_i / |A u_i|` followed by block
//! orthonormalization, with Rayleigh quotients as eigenvalue estimates. The
//! accelerated method replaces `A u_i` by `A u_i + alpha_i P_i A P_i u_i`,
//! where `P_i = q_i q_iᵀ` projects onto the `i`-th eigenvector of the coarse
//! covariance. Since `P_i A P_i u = s_i (q_i·u) q_i` with `s_i = q_iᵀ A q_i`,
//! the extra term costs only vector operations once `A q_i` and `A² q_i` are
//! known.

mod alpha;
mod config;
pub mod dense;
mod iteration;
mod metrics;
mod projector;
mod spectrum;

pub use alpha::{alpha_compute, alpha_terms, AlphaTerms};
pub use config::{AlphaMode, SolverConfig};
pub use iteration::{
    accelerated_subspace, accelerated_subspace_from, power_subspace, power_subspace_from,
    random_start, Solution,
};
pub use metrics::{error1, error2, rayleigh};
pub use projector::{
    coarse_operator, solve_coarse, Projector, ProjectorSet, COARSE_MAX_ITER, COARSE_TOL,
};
pub use spectrum::{IterationTrace, SpectrumApprox, TraceRow};
