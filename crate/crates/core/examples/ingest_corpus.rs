// Turns a directory of plain-text documents into a term-count matrix,
// writes the MatrixMarket / vocabulary / stats trio and reads the matrix
// back.
//
//     cargo run --example ingest_corpus

use aggpca::ingest::{
    build_matrix, default_stopwords, read_corpus_dir, read_matrix_market, write_matrix_market,
    write_stats, write_vocabulary,
};

fn run_example() -> aggpca::Result<()> {
    let dir = tempfile::tempdir().expect("temporary directory");
    let docs = [
        ("a.txt", "The heart pumps blood; the heart rate rises."),
        ("b.txt", "Blood pressure and heart disease."),
        ("c.txt", "Elections, votes and the senate."),
        ("d.txt", "The the and of"),
    ];
    for (name, text) in docs {
        std::fs::write(dir.path().join(name), text).expect("write document");
    }

    let corpus = build_matrix(&read_corpus_dir(dir.path())?, &default_stopwords())?;
    println!("{}", corpus.stats);
    println!("documents kept: {:?}", corpus.doc_ids);
    for (id, term) in corpus.vocabulary.terms().iter().enumerate() {
        println!("  {id:2} {term:10} df={}", corpus.vocabulary.doc_freq()[id]);
    }

    let prefix = dir.path().join("corpus");
    let mtx = prefix.with_extension("mtx");
    write_matrix_market(&corpus.matrix, &mtx)?;
    write_vocabulary(&corpus.vocabulary, prefix.with_extension("vocab.tsv"))?;
    write_stats(&corpus.stats, prefix.with_extension("stats.txt"))?;
    let back = read_matrix_market(&mtx)?;
    assert_eq!(back, corpus.matrix);
    println!(
        "round trip through {} ok",
        mtx.file_name().unwrap().to_string_lossy()
    );
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
