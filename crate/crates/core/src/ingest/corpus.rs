use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use super::tokenize;
use crate::sparse::SparseMatrix;
use crate::{Error, Result};

/// Terms in order of first appearance with their document frequencies.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    doc_freq: Vec<usize>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freq(&self) -> &[usize] {
        &self.doc_freq
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    fn intern(&mut self, term: &str) -> usize {
        if let Some(&id) = self.index.get(term) {
            return id;
        }
        let id = self.terms.len();
        self.terms.push(term.to_owned());
        self.index.insert(term.to_owned(), id);
        self.doc_freq.push(0);
        id
    }

    /// Placeholder vocabulary (`term_0`, `term_1`, ...) for a matrix that
    /// arrived without one; document frequencies are the row occupancies.
    pub fn placeholder(x: &SparseMatrix) -> Self {
        let mut vocab = Vocabulary::default();
        for i in 0..x.rows() {
            vocab.intern(&format!("term_{i}"));
        }
        for &i in x.row_idx() {
            vocab.doc_freq[i] += 1;
        }
        vocab
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusStats {
    pub n_docs: usize,
    pub n_terms: usize,
    pub nnz: usize,
    pub dropped_empty_docs: usize,
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n_docs={} n_terms={} nnz={} dropped_empty_docs={}",
            self.n_docs, self.n_terms, self.nnz, self.dropped_empty_docs
        )
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub matrix: SparseMatrix,
    pub vocabulary: Vocabulary,
    pub stats: CorpusStats,
    /// Identifiers of the retained documents, one per matrix column.
    pub doc_ids: Vec<String>,
}

/// Builds the raw term-count matrix of `docs`. Column `j` is the `j`-th
/// document that kept at least one token; empty documents are dropped and
/// counted.
pub fn build_matrix<S: AsRef<str>, T: AsRef<str>>(
    docs: &[(S, T)],
    stopwords: &HashSet<String>,
) -> Result<Corpus> {
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut vocab = Vocabulary::default();
    let mut columns = Vec::new();
    let mut doc_ids = Vec::new();
    let mut dropped = 0;

    for (id, text) in docs {
        let tokens = tokenize(text.as_ref(), stopwords);
        if tokens.is_empty() {
            dropped += 1;
            continue;
        }
        let mut counts: Vec<(usize, f64)> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for tok in &tokens {
            let term = vocab.intern(tok);
            match slot.get(&term) {
                Some(&k) => counts[k].1 += 1.0,
                None => {
                    slot.insert(term, counts.len());
                    counts.push((term, 1.0));
                    vocab.doc_freq[term] += 1;
                }
            }
        }
        columns.push(counts);
        doc_ids.push(id.as_ref().to_owned());
    }
    if columns.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let matrix = SparseMatrix::from_columns(vocab.len(), columns)?;
    let stats = CorpusStats {
        n_docs: matrix.cols(),
        n_terms: matrix.rows(),
        nnz: matrix.nnz(),
        dropped_empty_docs: dropped,
    };
    Ok(Corpus {
        matrix,
        vocabulary: vocab,
        stats,
        doc_ids,
    })
}

/// Reads every `.txt` file in `dir` (sorted by file name) as one document
/// whose id is the file name.
pub fn read_corpus_dir(dir: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    let dir = dir.as_ref();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
            paths.push(path);
        }
    }
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
            let id = p.file_name().unwrap().to_string_lossy().into_owned();
            Ok((id, text))
        })
        .collect()
}

/// Writes `term<TAB>id<TAB>doc_freq` lines.
pub fn write_vocabulary(vocab: &Vocabulary, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for (id, (term, df)) in vocab.terms.iter().zip(&vocab.doc_freq).enumerate() {
        out.push_str(&format!("{term}\t{id}\t{df}\n"));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Writes one `key=value` line per statistic.
pub fn write_stats(stats: &CorpusStats, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = stats.to_string().replace(' ', "\n") + "\n";
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
