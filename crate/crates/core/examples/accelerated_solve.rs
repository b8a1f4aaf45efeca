// The aggregation-accelerated iteration: coarse eigenvectors from the
// clustered problem steer each fine iterate through a per-direction weight
// alpha. Prints the weights of the first directions over time.
//
//     cargo run --example accelerated_solve

use std::sync::Arc;

use aggpca::aggregation::{build_aggregate, kmeans, KMeansConfig};
use aggpca::eigensolver::{accelerated_subspace, solve_coarse, SolverConfig};
use aggpca::sparse::CovarianceOperator;
use aggpca::synth::{generate, SynthConfig};

fn run_example() -> aggpca::Result<()> {
    let s = generate(&SynthConfig {
        topics: 5,
        docs_per_topic: 20,
        vocab: 500,
        ..SynthConfig::default()
    })?;
    let x = Arc::new(s.corpus.matrix);
    let op = CovarianceOperator::new(Arc::clone(&x));
    let cfg = SolverConfig {
        l: 5,
        k_coarse: 5,
        max_iter: 40,
        tol_error1: 0.0,
        tol_error2: 0.0,
        ..SolverConfig::default()
    };
    let clustering = kmeans(&x, &KMeansConfig::new(5, cfg.seed))?;
    let agg = build_aggregate(&x, &clustering)?;
    let proj = solve_coarse(agg.x0, &op, cfg.k_coarse, &cfg)?;
    let sol = accelerated_subspace(&op, &proj, &cfg)?;

    println!("iter   error1       error2       alpha_1    alpha_2    alpha_3");
    for row in sol
        .trace
        .rows
        .iter()
        .filter(|r| r.iter <= 5 || r.iter % 10 == 0)
    {
        println!(
            "{:4}   {:.3e}   {:.3e}   {:9.4}  {:9.4}  {:9.4}",
            row.iter, row.error1, row.error2, row.alphas[0], row.alphas[1], row.alphas[2]
        );
    }
    println!("eigenvalues: {:?}", sol.spectrum.lambdas);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
