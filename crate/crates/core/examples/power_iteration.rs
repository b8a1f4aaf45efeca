// Plain block power iteration on a small random matrix, checked against
// the dense Jacobi eigensolver.
//
//     cargo run --example power_iteration

use aggpca::eigensolver::dense::{dense_covariance, dense_eig_oracle};
use aggpca::eigensolver::{power_subspace, AlphaMode, SolverConfig};
use aggpca::sparse::{CovarianceOperator, SparseMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn run_example() -> aggpca::Result<()> {
    let (m, n) = (30, 20);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let data: Vec<f64> = (0..m * n)
        .map(|_| {
            if rng.random::<f64>() < 0.3 {
                rng.random_range(1.0..5.0f64).round()
            } else {
                0.0
            }
        })
        .collect();
    let x = SparseMatrix::from_dense(m, n, &data)?;
    let op = CovarianceOperator::new(x.clone());
    let cfg = SolverConfig {
        l: 3,
        k_coarse: 3,
        max_iter: 2000,
        tol_error1: 1e-12,
        tol_error2: 1e-8,
        alpha_mode: AlphaMode::Off,
        ..SolverConfig::default()
    };
    let sol = power_subspace(&op, &cfg)?;
    let exact = dense_eig_oracle(&dense_covariance(&x, None), m)?;
    println!(
        "converged={} after {} iterations, {} operator applies",
        sol.trace.converged,
        sol.trace.iterations(),
        op.apply_count()
    );
    for (i, lam) in sol.spectrum.lambdas.iter().enumerate() {
        println!(
            "  lambda_{} = {lam:.10}  (Jacobi {:.10})",
            i + 1,
            exact.values[i]
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
