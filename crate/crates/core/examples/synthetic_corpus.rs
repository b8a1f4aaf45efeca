// Planted-topic corpus generator: each topic owns a vocabulary block and
// later topics write longer documents.
//
//     cargo run --example synthetic_corpus

use aggpca::synth::{generate, SynthConfig};

fn run_example() -> aggpca::Result<()> {
    let cfg = SynthConfig {
        topics: 4,
        docs_per_topic: 10,
        vocab: 200,
        ..SynthConfig::default()
    };
    let s = generate(&cfg)?;
    let x = &s.corpus.matrix;
    println!("{}", s.corpus.stats);
    let block = cfg.vocab / cfg.topics;
    for t in 0..cfg.topics {
        let (mut own, mut total) = (0.0, 0.0);
        for j in (0..x.cols()).filter(|&j| s.topics[j] == t) {
            let (rows, vals) = x.column(j);
            for (&i, &v) in rows.iter().zip(vals) {
                total += v;
                if i / block == t {
                    own += v;
                }
            }
        }
        println!(
            "topic {t}: {:.0} tokens, {:.1}% inside its own block",
            total,
            100.0 * own / total
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
