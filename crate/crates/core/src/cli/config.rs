use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::eigensolver::{AlphaMode, SolverConfig};
use crate::synth::SynthConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Power,
    Aggregated,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(Method::Power),
            "aggregated" => Ok(Method::Aggregated),
            other => Err(Error::InvalidArgument(format!(
                "unknown method '{other}' (expected power or aggregated)"
            ))),
        }
    }
}

/// Every knob a subcommand may read. Built from defaults, then a config
/// file, then command-line flags, each layer overriding the previous one.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub out_prefix: Option<PathBuf>,
    pub method: Method,
    pub l: usize,
    pub clusters: usize,
    /// Defaults to `l` when unset.
    pub k_coarse: Option<usize>,
    pub alpha_mode: AlphaMode,
    pub alpha_cap: f64,
    pub retire_patience: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub tol_eigvals: f64,
    pub tol_residual: f64,
    pub centering: bool,
    pub stopwords: Option<PathBuf>,
    pub strict: bool,
    pub kmeans_restarts: usize,
    pub threads: usize,
    pub synth: SynthConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let solver = SolverConfig::default();
        RunConfig {
            input: None,
            out_prefix: None,
            method: Method::Aggregated,
            l: solver.l,
            clusters: 10,
            k_coarse: None,
            alpha_mode: solver.alpha_mode,
            alpha_cap: solver.alpha_cap,
            retire_patience: solver.retire_patience,
            seed: solver.seed,
            max_iter: solver.max_iter,
            tol_eigvals: solver.tol_error1,
            tol_residual: solver.tol_error2,
            centering: false,
            stopwords: None,
            strict: false,
            kmeans_restarts: 1,
            threads: 1,
            synth: SynthConfig::default(),
        }
    }
}

/// Keys accepted in config files. Flags use the same names with dashes.
pub const KEYS: &[&str] = &[
    "input",
    "out_prefix",
    "method",
    "l",
    "clusters",
    "k_coarse",
    "alpha_mode",
    "alpha_cap",
    "retire_patience",
    "seed",
    "max_iter",
    "tol_eigvals",
    "tol_residual",
    "centering",
    "stopwords",
    "strict",
    "kmeans_restarts",
    "topics",
    "docs_per_topic",
    "vocab",
    "noise",
    "doc_len",
    "growth",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad value '{value}' for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(Error::InvalidArgument(format!(
            "bad boolean '{value}' for {key}"
        ))),
    }
}

impl RunConfig {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "input" => self.input = Some(PathBuf::from(value)),
            "out_prefix" => self.out_prefix = Some(PathBuf::from(value)),
            "method" => self.method = value.parse()?,
            "l" => self.l = parse(key, value)?,
            "clusters" => self.clusters = parse(key, value)?,
            "k_coarse" => self.k_coarse = Some(parse(key, value)?),
            "alpha_mode" => self.alpha_mode = value.parse()?,
            "alpha_cap" => self.alpha_cap = parse(key, value)?,
            "retire_patience" => self.retire_patience = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "max_iter" => self.max_iter = parse(key, value)?,
            "tol_eigvals" => self.tol_eigvals = parse(key, value)?,
            "tol_residual" => self.tol_residual = parse(key, value)?,
            "centering" => self.centering = parse_bool(key, value)?,
            "stopwords" => self.stopwords = Some(PathBuf::from(value)),
            "strict" => self.strict = parse_bool(key, value)?,
            "kmeans_restarts" => self.kmeans_restarts = parse(key, value)?,
            "topics" => self.synth.topics = parse(key, value)?,
            "docs_per_topic" => self.synth.docs_per_topic = parse(key, value)?,
            "vocab" => self.synth.vocab = parse(key, value)?,
            "noise" => self.synth.noise = parse(key, value)?,
            "doc_len" => self.synth.doc_len = parse(key, value)?,
            "growth" => self.synth.growth = parse(key, value)?,
            other => return Err(Error::InvalidArgument(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines. Blank lines and `#` comments are skipped;
    /// unknown keys are rejected with the offending line number.
    pub fn merge_text(&mut self, text: &str, origin: &Path) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let located =
                |m: String| Error::InvalidArgument(format!("{}:{}: {m}", origin.display(), n + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| located(format!("expected 'key = value', got '{line}'")))?;
            self.set(key.trim(), value).map_err(|e| match e {
                Error::InvalidArgument(m) => located(m),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::InvalidArgument(format!("cannot read config {}: {e}", path.display()))
        })?;
        self.merge_text(&text, path)
    }

    pub fn solver(&self) -> Result<SolverConfig> {
        let cfg = SolverConfig {
            l: self.l,
            k_coarse: self.k_coarse.unwrap_or(self.l),
            max_iter: self.max_iter,
            tol_error1: self.tol_eigvals,
            tol_error2: self.tol_residual,
            alpha_mode: self.alpha_mode,
            alpha_cap: self.alpha_cap,
            retire_patience: self.retire_patience,
            seed: self.seed,
            centering: self.centering,
        };
        cfg.validate()?;
        if self.method == Method::Aggregated
            && cfg.alpha_mode != AlphaMode::Off
            && cfg.k_coarse > self.clusters
        {
            return Err(Error::InvalidArgument(format!(
                "k_coarse ({}) exceeds the number of clusters ({})",
                cfg.k_coarse, self.clusters
            )));
        }
        Ok(cfg)
    }

    pub fn require_input(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("missing --input".into()))
    }

    pub fn require_out_prefix(&self) -> Result<&Path> {
        self.out_prefix
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("missing --out-prefix".into()))
    }
}

/// `<prefix><suffix>`, e.g. `run/a` + `.mtx` = `run/a.mtx`.
pub fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}
