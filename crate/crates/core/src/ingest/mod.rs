//! Text corpora to term-frequency matrices, plus interchange formats.

mod corpus;
mod mtx;
mod stopwords;
mod tokenize;

pub use corpus::{
    build_matrix, read_corpus_dir, write_stats, write_vocabulary, Corpus, CorpusStats, Vocabulary,
};
pub use mtx::{
    read_dense_array, read_matrix_market, read_matrix_market_from, write_dense_array,
    write_matrix_market,
};
pub use stopwords::{default_stopwords, read_stopwords};
pub use tokenize::tokenize;
