// Drives the same pipeline as the `aggpca` binary: generate a corpus,
// then run power and aggregated iterations head to head and write the
// comparison CSV.
//
//     cargo run --example compare_methods

use aggpca::cli::{cmd_compare, cmd_synth, with_suffix, RunConfig};

fn run_example() -> aggpca::Result<()> {
    let dir = tempfile::tempdir().expect("temporary directory");
    let prefix = dir.path().join("topics");
    let mut cfg = RunConfig::default();
    cfg.set("out_prefix", prefix.to_str().unwrap())?;
    cfg.set("seed", "2")?;
    for (k, v) in [("topics", "5"), ("docs_per_topic", "20"), ("vocab", "500")] {
        cfg.set(k, v)?;
    }
    let stats = cmd_synth(&cfg)?;
    println!("corpus: {stats}");

    cfg.set("input", with_suffix(&prefix, ".mtx").to_str().unwrap())?;
    cfg.set("l", "5")?;
    cfg.set("clusters", "5")?;
    cfg.set("tol_eigvals", "1")?;
    cfg.set("tol_residual", "1e-3")?;
    cfg.set("max_iter", "3000")?;
    cmd_compare(&cfg)?;
    let csv = std::fs::read_to_string(with_suffix(&prefix, ".compare.csv")).expect("compare.csv");
    print!("{csv}");
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
