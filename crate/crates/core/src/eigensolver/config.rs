use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// How the projector weight `alpha` is chosen each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlphaMode {
    /// No projector term; the iteration is plain subspace iteration.
    Off,
    /// Closed-form ratio whose numerator equals the `Derived` one but whose
    /// denominator uses `(Au, AFu)` in place of `(AFu, AFu)`.
    Paper,
    /// Exact minimizer of the unnormalized residual `|(A - λ)(Au + αFu)|`.
    #[default]
    Derived,
    /// Exact minimizer of the residual of the normalized next iterate,
    /// `|(A - λ)v| / |v|` with `v = Au + αFu`. Costs one extra operator
    /// apply per direction.
    Normalized,
}

impl AlphaMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AlphaMode::Off => "off",
            AlphaMode::Paper => "paper",
            AlphaMode::Derived => "derived",
            AlphaMode::Normalized => "normalized",
        }
    }
}

impl fmt::Display for AlphaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlphaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "off" => Ok(AlphaMode::Off),
            "paper" => Ok(AlphaMode::Paper),
            "derived" => Ok(AlphaMode::Derived),
            "normalized" => Ok(AlphaMode::Normalized),
            _ => Err(Error::InvalidArgument(format!(
                "unknown alpha mode '{s}' (expected off, paper, derived or normalized)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Number of sought eigenpairs.
    pub l: usize,
    /// Number of coarse eigenvectors used as projectors, at least `l`.
    pub k_coarse: usize,
    pub max_iter: usize,
    /// Stop once the relative eigenvalue change drops below this...
    pub tol_error1: f64,
    /// ...and the block residual norm drops below this. Zero tolerances
    /// run exactly `max_iter` iterations.
    pub tol_error2: f64,
    pub alpha_mode: AlphaMode,
    pub alpha_cap: f64,
    /// Drop projector `i` for good once the residual of direction `i` has
    /// gone this many iterations without a new minimum. Zero keeps every
    /// projector active.
    pub retire_patience: usize,
    pub seed: u64,
    pub centering: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            l: 10,
            k_coarse: 10,
            max_iter: 200,
            tol_error1: 1e-6,
            tol_error2: 1e-6,
            alpha_mode: AlphaMode::default(),
            alpha_cap: 1e6,
            retire_patience: 20,
            seed: 42,
            centering: false,
        }
    }
}

impl SolverConfig {
    pub fn with_l(l: usize) -> Self {
        SolverConfig {
            l,
            k_coarse: l,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.l == 0 {
            return bad("l must be at least 1".into());
        }
        if self.k_coarse < self.l {
            return bad(format!(
                "k_coarse ({}) must be >= l ({})",
                self.k_coarse, self.l
            ));
        }
        for (name, tol) in [
            ("tol_error1", self.tol_error1),
            ("tol_error2", self.tol_error2),
        ] {
            if !(tol >= 0.0 && tol.is_finite()) {
                return bad(format!("{name} must be a finite non-negative number"));
            }
        }
        if !(self.alpha_cap > 0.0 && self.alpha_cap.is_finite()) {
            return bad("alpha_cap must be positive".into());
        }
        Ok(())
    }
}
