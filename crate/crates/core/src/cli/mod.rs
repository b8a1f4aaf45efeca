//! Batch command-line front end.
//!
//! Each subcommand resolves a [`RunConfig`] (defaults, then `--config`
//! file, then flags), runs one of the `cmd_*` functions and reports on
//! stdout. Exit codes: 0 success, 2 configuration error, 3 data error,
//! 4 convergence failure (`spectrum` always, `solve`/`compare` only under
//! `--strict`).

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{
    cmd_compare, cmd_ingest, cmd_solve, cmd_spectrum, cmd_synth, run_method, CompareRow, MethodRun,
    SpectrumReport,
};
pub use config::{with_suffix, Method, RunConfig, KEYS};

use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

/// Environment variable capping kernel threads.
pub const THREADS_ENV: &str = "AGGPCA_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "aggpca",
    version,
    about = "Aggregation-accelerated PCA for sparse term-document matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build `<prefix>.mtx/.vocab.tsv/.stats.txt` from a directory of .txt files or an .mtx file
    Ingest(Flags),
    /// Generate a planted-topic corpus
    Synth(Flags),
    /// Compare leading eigenvalues of the original and aggregated covariances
    Spectrum(Flags),
    /// Compute leading eigenpairs
    Solve(Flags),
    /// Run power and aggregated iterations head to head
    Compare(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    out_prefix: Option<String>,
    /// power | aggregated
    #[arg(long)]
    method: Option<String>,
    /// Number of eigenpairs (top_k for spectrum)
    #[arg(long = "l")]
    l: Option<String>,
    #[arg(long)]
    clusters: Option<String>,
    #[arg(long)]
    k_coarse: Option<String>,
    /// off | paper | derived | normalized
    #[arg(long)]
    alpha_mode: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    max_iter: Option<String>,
    /// Tolerance on the relative eigenvalue change
    #[arg(long)]
    tol_eigvals: Option<String>,
    /// Tolerance on the block residual norm
    #[arg(long)]
    tol_residual: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    centering: Option<String>,
    #[arg(long)]
    stopwords: Option<String>,
    /// Flat `key = value` file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Exit 4 when tolerances are not met
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    strict: Option<String>,
}

impl Flags {
    fn resolve(&self, threads: usize) -> crate::Result<RunConfig> {
        let mut cfg = RunConfig {
            threads,
            ..RunConfig::default()
        };
        if let Some(path) = &self.config {
            cfg.merge_file(path)?;
        }
        let pairs = [
            ("input", &self.input),
            ("out_prefix", &self.out_prefix),
            ("method", &self.method),
            ("l", &self.l),
            ("clusters", &self.clusters),
            ("k_coarse", &self.k_coarse),
            ("alpha_mode", &self.alpha_mode),
            ("seed", &self.seed),
            ("max_iter", &self.max_iter),
            ("tol_eigvals", &self.tol_eigvals),
            ("tol_residual", &self.tol_residual),
            ("centering", &self.centering),
            ("stopwords", &self.stopwords),
            ("strict", &self.strict),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        Ok(cfg)
    }
}

/// Exit code for a failed command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) => EXIT_CONFIG,
        Error::NoConvergence { .. } => EXIT_CONVERGENCE,
        _ => EXIT_DATA,
    }
}

fn threads_from_env() -> crate::Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(t),
            _ => Err(Error::InvalidArgument(format!(
                "{THREADS_ENV} must be a positive integer, got '{v}'"
            ))),
        },
    }
}

fn fmt_opt(v: Option<usize>) -> String {
    v.map_or("NA".into(), |k| k.to_string())
}

fn run(command: Command) -> crate::Result<i32> {
    let threads = threads_from_env()?;
    match command {
        Command::Ingest(f) => {
            let s = cmd_ingest(&f.resolve(threads)?)?;
            println!("m={} n={} nnz={}", s.n_terms, s.n_docs, s.nnz);
            Ok(EXIT_OK)
        }
        Command::Synth(f) => {
            let s = cmd_synth(&f.resolve(threads)?)?;
            println!("m={} n={} nnz={}", s.n_terms, s.n_docs, s.nnz);
            Ok(EXIT_OK)
        }
        Command::Spectrum(f) => {
            let r = cmd_spectrum(&f.resolve(threads)?)?;
            println!("cost ratio n/n0 = {:.4}", r.cost_ratio);
            Ok(EXIT_OK)
        }
        Command::Solve(f) => {
            let cfg = f.resolve(threads)?;
            let r = cmd_solve(&cfg)?;
            let trace = &r.solution.trace;
            let (e1, e2) = trace
                .last()
                .map_or((f64::NAN, f64::NAN), |t| (t.error1, t.error2));
            println!(
                "iterations={} error1={e1:e} error2={e2:e} converged={}",
                trace.iterations(),
                trace.converged
            );
            Ok(if cfg.strict && !trace.converged {
                EXIT_CONVERGENCE
            } else {
                EXIT_OK
            })
        }
        Command::Compare(f) => {
            let cfg = f.resolve(threads)?;
            let rows = cmd_compare(&cfg)?;
            for r in &rows {
                println!(
                    "{}: iterations_to_tol={} error1={:e} error2={:e} operator_applies={}",
                    r.method,
                    fmt_opt(r.iterations_to_tol),
                    r.final_error1,
                    r.final_error2,
                    r.operator_applies
                );
            }
            let unmet = rows.iter().any(|r| r.iterations_to_tol.is_none());
            Ok(if cfg.strict && unmet {
                EXIT_CONVERGENCE
            } else {
                EXIT_OK
            })
        }
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code. Errors go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(code) => {
            if code == EXIT_CONVERGENCE {
                eprintln!("error: tolerances not met within max_iter");
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
