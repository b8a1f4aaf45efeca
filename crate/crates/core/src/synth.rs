//! Planted-topic corpora for experiments that need no external data.
//!
//! The vocabulary is split into one contiguous block per topic. A document
//! of topic `t` draws each token from the topic's Zipf-shaped distribution
//! over its block, or with probability `noise` uniformly from the whole
//! vocabulary. Topic `t` documents are longer by a factor `growth^t` on
//! average, which separates the leading eigenvalues.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::{Corpus, CorpusStats, Vocabulary};
use crate::sparse::SparseMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub topics: usize,
    pub docs_per_topic: usize,
    pub vocab: usize,
    /// Probability that a token ignores the topic.
    pub noise: f64,
    /// Mean document length of the first topic, in tokens.
    pub doc_len: usize,
    /// Ratio between the mean lengths of consecutive topics.
    pub growth: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            topics: 10,
            docs_per_topic: 50,
            vocab: 2000,
            noise: 0.2,
            doc_len: 80,
            growth: 1.1,
            seed: 1,
        }
    }
}

/// A generated corpus plus the planted topic of each document.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub corpus: Corpus,
    pub topics: Vec<usize>,
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthCorpus> {
    if cfg.topics == 0 || cfg.docs_per_topic == 0 || cfg.doc_len == 0 {
        return Err(Error::InvalidArgument(
            "topics, docs per topic and document length must be positive".into(),
        ));
    }
    if cfg.vocab < cfg.topics {
        return Err(Error::InvalidArgument(format!(
            "vocabulary ({}) smaller than topic count ({})",
            cfg.vocab, cfg.topics
        )));
    }
    if !(0.0..=1.0).contains(&cfg.noise) {
        return Err(Error::InvalidArgument(
            "noise rate must lie in [0, 1]".into(),
        ));
    }

    if !(cfg.growth.is_finite() && cfg.growth > 0.0) {
        return Err(Error::InvalidArgument(
            "length growth must be positive".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let block = cfg.vocab / cfg.topics;
    let zipf: Vec<f64> = (0..block).map(|r| 1.0 / (r + 1) as f64).collect();
    let within = WeightedIndex::new(&zipf).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    // Random rank-to-term order inside each topic block.
    let orders: Vec<Vec<usize>> = (0..cfg.topics)
        .map(|t| {
            let mut ids: Vec<usize> = (t * block..(t + 1) * block).collect();
            for i in (1..ids.len()).rev() {
                ids.swap(i, rng.random_range(0..=i));
            }
            ids
        })
        .collect();

    let mut columns = Vec::with_capacity(cfg.topics * cfg.docs_per_topic);
    let mut labels = Vec::with_capacity(columns.capacity());
    for (t, order) in orders.iter().enumerate() {
        let mean = cfg.doc_len as f64 * cfg.growth.powi(t as i32);
        for _ in 0..cfg.docs_per_topic {
            let len = rng.random_range(0.5 * mean..1.5 * mean).round().max(1.0) as usize;
            let mut counts = vec![0u32; cfg.vocab];
            for _ in 0..len {
                let term = if rng.random::<f64>() < cfg.noise {
                    rng.random_range(0..cfg.vocab)
                } else {
                    order[within.sample(&mut rng)]
                };
                counts[term] += 1;
            }
            let col: Vec<(usize, f64)> = counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| (i, c as f64))
                .collect();
            columns.push(col);
            labels.push(t);
        }
    }

    let matrix = SparseMatrix::from_columns(cfg.vocab, columns)?;
    let vocabulary = Vocabulary::placeholder(&matrix);
    let stats = CorpusStats {
        n_docs: matrix.cols(),
        n_terms: matrix.rows(),
        nnz: matrix.nnz(),
        dropped_empty_docs: 0,
    };
    let doc_ids = (0..matrix.cols()).map(|j| format!("doc{j:05}")).collect();
    Ok(SynthCorpus {
        corpus: Corpus {
            matrix,
            vocabulary,
            stats,
            doc_ids,
        },
        topics: labels,
    })
}
