use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use super::config::{with_suffix, Method, RunConfig};
use crate::aggregation::{
    build_aggregate, kmeans, spectrum_compare, write_clustering_csv, Clustering, KMeansConfig,
    SpectrumComparison,
};
use crate::eigensolver::{
    accelerated_subspace, power_subspace, solve_coarse, AlphaMode, IterationTrace, ProjectorSet,
    Solution,
};
use crate::ingest::{
    build_matrix, default_stopwords, read_corpus_dir, read_matrix_market, read_stopwords,
    write_dense_array, write_matrix_market, write_stats, write_vocabulary, Corpus, CorpusStats,
    Vocabulary,
};
use crate::sparse::{CovarianceOperator, SparseMatrix};
use crate::synth::generate;
use crate::{Error, Result};

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_corpus(corpus: &Corpus, prefix: &Path) -> Result<()> {
    write_matrix_market(&corpus.matrix, with_suffix(prefix, ".mtx"))?;
    write_vocabulary(&corpus.vocabulary, with_suffix(prefix, ".vocab.tsv"))?;
    write_stats(&corpus.stats, with_suffix(prefix, ".stats.txt"))
}

/// Builds the term-document matrix from a directory of `.txt` files, or
/// passes an existing `.mtx` file through with a placeholder vocabulary.
pub fn cmd_ingest(cfg: &RunConfig) -> Result<CorpusStats> {
    let input = cfg.require_input()?;
    let prefix = cfg.require_out_prefix()?;
    let corpus = if input.is_file() && input.extension().is_some_and(|e| e == "mtx") {
        let matrix = read_matrix_market(input)?;
        let stats = CorpusStats {
            n_docs: matrix.cols(),
            n_terms: matrix.rows(),
            nnz: matrix.nnz(),
            dropped_empty_docs: 0,
        };
        Corpus {
            vocabulary: Vocabulary::placeholder(&matrix),
            doc_ids: (0..matrix.cols()).map(|j| j.to_string()).collect(),
            matrix,
            stats,
        }
    } else {
        let stopwords = match &cfg.stopwords {
            Some(p) => read_stopwords(p)?,
            None => default_stopwords(),
        };
        build_matrix(&read_corpus_dir(input)?, &stopwords)?
    };
    write_corpus(&corpus, prefix)?;
    Ok(corpus.stats)
}

/// Writes a planted-topic corpus plus `<prefix>.topics.csv` holding the
/// planted labels in clustering-CSV form.
pub fn cmd_synth(cfg: &RunConfig) -> Result<CorpusStats> {
    let prefix = cfg.require_out_prefix()?;
    let synth = generate(&crate::synth::SynthConfig {
        seed: cfg.seed,
        ..cfg.synth.clone()
    })?;
    write_corpus(&synth.corpus, prefix)?;
    let labels = Clustering::from_assignment(cfg.synth.topics, synth.topics)?;
    write_clustering_csv(
        &labels,
        Some(&synth.corpus.doc_ids),
        with_suffix(prefix, ".topics.csv"),
    )?;
    Ok(synth.corpus.stats)
}

fn load(cfg: &RunConfig) -> Result<Arc<SparseMatrix>> {
    Ok(Arc::new(read_matrix_market(cfg.require_input()?)?))
}

fn cluster(x: &SparseMatrix, cfg: &RunConfig) -> Result<Clustering> {
    kmeans(
        x,
        &KMeansConfig {
            restarts: cfg.kmeans_restarts,
            ..KMeansConfig::new(cfg.clusters, cfg.seed)
        },
    )
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub comparison: SpectrumComparison,
    /// `n / n₀`
    pub cost_ratio: f64,
}

/// Leading eigenvalues of the original and aggregated covariances, written
/// to `<prefix>.spectrum.csv`; the clustering goes to `<prefix>.clusters.csv`.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<SpectrumReport> {
    let prefix = cfg.require_out_prefix()?;
    if cfg.l > cfg.clusters {
        return Err(Error::InvalidArgument(format!(
            "l ({}) exceeds the number of clusters ({})",
            cfg.l, cfg.clusters
        )));
    }
    let x = load(cfg)?;
    let clustering = cluster(&x, cfg)?;
    let agg = build_aggregate(&x, &clustering)?;
    let cost_ratio = agg.cost_ratio();
    write_clustering_csv(&clustering, None, with_suffix(prefix, ".clusters.csv"))?;
    let comparison = spectrum_compare(x, agg.x0, cfg.l, cfg.seed, cfg.centering)?;
    let mut csv = String::from("index,lambda_original,lambda_aggregated\n");
    for (i, (a, b)) in comparison
        .original
        .iter()
        .zip(&comparison.aggregated)
        .enumerate()
    {
        writeln!(csv, "{},{a:.9e},{b:.9e}", i + 1).unwrap();
    }
    write_text(&with_suffix(prefix, ".spectrum.csv"), &csv)?;
    Ok(SpectrumReport {
        comparison,
        cost_ratio,
    })
}

/// One solver run with its fine-operator bookkeeping.
#[derive(Debug, Clone)]
pub struct MethodRun {
    pub solution: Solution,
    pub clustering: Option<Clustering>,
    /// Fine operator applications, including projector precomputation.
    pub operator_applies: usize,
}

/// Runs `method` on `x`. The aggregated method skips clustering and the
/// coarse solve entirely when `alpha_mode = off`, since no projector would
/// be used.
pub fn run_method(x: Arc<SparseMatrix>, cfg: &RunConfig, method: Method) -> Result<MethodRun> {
    let solver = cfg.solver()?;
    let op =
        CovarianceOperator::with_centering(Arc::clone(&x), cfg.centering).with_threads(cfg.threads);
    let (solution, clustering) = match method {
        Method::Power => (power_subspace(&op, &solver)?, None),
        Method::Aggregated if solver.alpha_mode == AlphaMode::Off => (
            accelerated_subspace(&op, &ProjectorSet::empty(), &solver)?,
            None,
        ),
        Method::Aggregated => {
            let clustering = cluster(&x, cfg)?;
            let agg = build_aggregate(&x, &clustering)?;
            let proj = solve_coarse(agg.x0, &op, solver.k_coarse, &solver)?;
            (accelerated_subspace(&op, &proj, &solver)?, Some(clustering))
        }
    };
    Ok(MethodRun {
        solution,
        clustering,
        operator_applies: op.apply_count(),
    })
}

fn trace_csv(trace: &IterationTrace, l: usize) -> String {
    let mut out = String::from("iter,error1,error2");
    for i in 1..=l {
        write!(out, ",alpha_{i}").unwrap();
    }
    out.push('\n');
    for row in &trace.rows {
        write!(out, "{},{:e},{:e}", row.iter, row.error1, row.error2).unwrap();
        for i in 0..l {
            write!(out, ",{:e}", row.alphas.get(i).copied().unwrap_or(0.0)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Solves for the leading `l` eigenpairs and writes `<prefix>.eigvals.csv`,
/// `<prefix>.vectors.mtx` and `<prefix>.trace.csv`, plus
/// `<prefix>.clusters.csv` when a clustering was built.
pub fn cmd_solve(cfg: &RunConfig) -> Result<MethodRun> {
    let prefix = cfg.require_out_prefix()?;
    cfg.solver()?;
    let run = run_method(load(cfg)?, cfg, cfg.method)?;
    let spectrum = &run.solution.spectrum;
    let mut eig = String::from("index,lambda\n");
    for (i, lam) in spectrum.lambdas.iter().enumerate() {
        writeln!(eig, "{},{lam:e}", i + 1).unwrap();
    }
    write_text(&with_suffix(prefix, ".eigvals.csv"), &eig)?;
    write_dense_array(&spectrum.vectors, with_suffix(prefix, ".vectors.mtx"))?;
    write_text(
        &with_suffix(prefix, ".trace.csv"),
        &trace_csv(&run.solution.trace, cfg.l),
    )?;
    if let Some(c) = &run.clustering {
        write_clustering_csv(c, None, with_suffix(prefix, ".clusters.csv"))?;
    }
    Ok(run)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub method: &'static str,
    /// `None` when the tolerances were not met within `max_iter`.
    pub iterations_to_tol: Option<usize>,
    pub final_error1: f64,
    pub final_error2: f64,
    pub operator_applies: usize,
}

impl CompareRow {
    fn from_run(method: &'static str, run: &MethodRun) -> Self {
        let trace = &run.solution.trace;
        let last = trace.last();
        CompareRow {
            method,
            iterations_to_tol: trace.converged.then(|| trace.iterations()),
            final_error1: last.map_or(f64::NAN, |r| r.error1),
            final_error2: last.map_or(f64::NAN, |r| r.error2),
            operator_applies: run.operator_applies,
        }
    }
}

/// Power and aggregated runs with identical seeds, written to
/// `<prefix>.compare.csv`. A run that misses its tolerances reports `NA`.
pub fn cmd_compare(cfg: &RunConfig) -> Result<Vec<CompareRow>> {
    let prefix = cfg.require_out_prefix()?;
    cfg.solver()?;
    let x = load(cfg)?;
    let rows = vec![
        CompareRow::from_run("power", &run_method(Arc::clone(&x), cfg, Method::Power)?),
        CompareRow::from_run("aggregated", &run_method(x, cfg, Method::Aggregated)?),
    ];
    let mut csv =
        String::from("method,iterations_to_tol,final_error1,final_error2,operator_applies\n");
    for r in &rows {
        let iters = r
            .iterations_to_tol
            .map_or("NA".to_string(), |k| k.to_string());
        writeln!(
            csv,
            "{},{iters},{:e},{:e},{}",
            r.method, r.final_error1, r.final_error2, r.operator_applies
        )
        .unwrap();
    }
    write_text(&with_suffix(prefix, ".compare.csv"), &csv)?;
    Ok(rows)
}
