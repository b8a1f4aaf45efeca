// Clusters documents, averages each cluster into one coarse column and
// compares the leading eigenvalues of the fine and coarse covariances.
//
//     cargo run --example kmeans_aggregate

use aggpca::aggregation::{build_aggregate, kmeans, spectrum_compare, KMeansConfig};
use aggpca::synth::{generate, SynthConfig};

fn run_example() -> aggpca::Result<()> {
    let s = generate(&SynthConfig {
        topics: 5,
        docs_per_topic: 20,
        vocab: 500,
        ..SynthConfig::default()
    })?;
    let x = s.corpus.matrix;
    let clustering = kmeans(&x, &KMeansConfig::new(5, 3))?;
    let agreement = (0..x.cols())
        .filter(|&a| {
            (0..x.cols()).all(|b| {
                (s.topics[a] == s.topics[b])
                    == (clustering.assignment[a] == clustering.assignment[b])
            })
        })
        .count();
    println!(
        "k-means: inertia {:.4} after {} iterations, {agreement}/{} documents grouped exactly like their topic",
        clustering.inertia,
        clustering.iterations_run,
        x.cols()
    );

    let agg = build_aggregate(&x, &clustering)?;
    println!(
        "coarse matrix {}x{}, per-apply cost ratio {:.1}",
        agg.x0.rows(),
        agg.x0.cols(),
        agg.cost_ratio()
    );
    let cmp = spectrum_compare(x, agg.x0, 5, 11, false)?;
    println!("  i   lambda(A)      lambda(A0)");
    for (i, (a, b)) in cmp.original.iter().zip(&cmp.aggregated).enumerate() {
        println!("  {}   {a:12.4}   {b:12.4}", i + 1);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
