//! Step size for the projector term.
//!
//! With `F = P A P`, `P = q qᵀ`, `s = qᵀAq`, `w = Aq`, `z = Aw` and
//! `c = q·u`, every quantity the rules need collapses onto the vectors
//! already at hand: `Fu = s c q`, `A Fu = s c w`, and by symmetry of `A`
//!
//! ```text
//! (A²u, AFu) = s c (Au·z)     (A²u, Fu) = (Au, AFu) = s c (Au·w)
//! (Au, Fu)   = s c (Au·q)     (Fu, Fu)  = s² c²
//! ```
//!
//! so the `paper` and `derived` rules need no operator applies beyond `Au`.

use super::{AlphaMode, Projector};
use crate::sparse::vector::dot;

const DEGENERATE: f64 = 1e-14;

/// Numerators and denominators of the closed-form rules, before guards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaTerms {
    /// `q·u`
    pub c: f64,
    /// `(A²u,AFu) - 2λ(A²u,Fu) + λ²(Au,Fu)`, evaluated term by term.
    pub paper_numerator: f64,
    /// `(Au,AFu) - 2λ(Au,Fu) + λ²(Fu,Fu)`
    pub paper_denominator: f64,
    /// `((A-λ)Au)·((A-λ)Fu)`, evaluated as `s c Au·(A-λ)²q`.
    pub derived_numerator: f64,
    /// `|(A-λ)Fu|²`
    pub derived_denominator: f64,
}

pub fn alpha_terms(u: &[f64], au: &[f64], proj: &Projector, lambda: f64) -> AlphaTerms {
    let c = dot(&proj.q, u);
    let sc = proj.s * c;
    let au_q = dot(au, &proj.q);
    let au_w = dot(au, &proj.w);
    let au_z = dot(au, &proj.z);

    let paper_numerator = sc * au_z - 2.0 * lambda * sc * au_w + lambda * lambda * sc * au_q;
    let paper_denominator = sc * au_w - 2.0 * lambda * sc * au_q + lambda * lambda * sc * sc;

    // (A-λ)q and (A-λ)²q, formed as vectors to avoid cancellation.
    let shifted: Vec<f64> = proj
        .w
        .iter()
        .zip(&proj.q)
        .map(|(w, q)| w - lambda * q)
        .collect();
    let shifted2: Vec<f64> = proj
        .z
        .iter()
        .zip(&proj.w)
        .zip(&shifted)
        .map(|((z, w), t)| (z - lambda * w) - lambda * t)
        .collect();
    let derived_numerator = sc * dot(au, &shifted2);
    let derived_denominator = sc * sc * dot(&shifted, &shifted);

    AlphaTerms {
        c,
        paper_numerator,
        paper_denominator,
        derived_numerator,
        derived_denominator,
    }
}

/// Projector weight for direction `proj` at unit iterate `u`.
///
/// `lambda` is the current eigenvalue estimate for `u`. `a2u = A(Au)` is
/// read only by [`AlphaMode::Normalized`]; without it that mode returns 0.
/// Degenerate configurations (`q ⟂ u`, vanishing denominators) return 0 and
/// the result is clamped to `[-cap, cap]`.
pub fn alpha_compute(
    u: &[f64],
    au: &[f64],
    a2u: Option<&[f64]>,
    proj: &Projector,
    lambda: f64,
    mode: AlphaMode,
    cap: f64,
) -> f64 {
    if mode == AlphaMode::Off {
        return 0.0;
    }
    let terms = alpha_terms(u, au, proj, lambda);
    if terms.c.abs() < DEGENERATE {
        return 0.0;
    }
    let alpha = match mode {
        AlphaMode::Off => unreachable!(),
        AlphaMode::Paper => ratio(terms.paper_numerator, terms.paper_denominator),
        AlphaMode::Derived => ratio(terms.derived_numerator, terms.derived_denominator),
        AlphaMode::Normalized => match a2u {
            Some(a2u) => normalized_minimizer(au, a2u, proj, lambda, &terms, cap),
            None => 0.0,
        },
    };
    alpha.clamp(-cap, cap)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den.abs() < DEGENERATE * (num.abs() + 1.0) {
        0.0
    } else {
        -num / den
    }
}

/// Minimizes `N(α)/D(α)` with `N = |r + αg|²`, `D = |Au + αFu|²`,
/// `r = (A-λ)Au`, `g = (A-λ)Fu`. Stationary points solve
/// `(N₂D₁ - N₁D₂)α² + (N₂D₀ - N₀D₂)α + (N₁D₀ - N₀D₁) = 0` where
/// `N = N₀ + 2N₁α + N₂α²` and likewise for `D`; the minimum over those
/// roots, `α = 0` and `α = ±cap` is returned.
fn normalized_minimizer(
    au: &[f64],
    a2u: &[f64],
    proj: &Projector,
    lambda: f64,
    terms: &AlphaTerms,
    cap: f64,
) -> f64 {
    let sc = proj.s * terms.c;
    let r: Vec<f64> = a2u.iter().zip(au).map(|(x, y)| x - lambda * y).collect();
    let n0 = dot(&r, &r);
    let n1 = terms.derived_numerator;
    let n2 = terms.derived_denominator;
    let d0 = dot(au, au);
    let d1 = sc * dot(au, &proj.q);
    let d2 = sc * sc;
    if d0 == 0.0 || n2 == 0.0 {
        return 0.0;
    }

    let objective = |a: f64| {
        let d = d0 + 2.0 * d1 * a + d2 * a * a;
        let n = n0 + 2.0 * n1 * a + n2 * a * a;
        if d > DEGENERATE * d0 {
            n.max(0.0) / d
        } else {
            f64::INFINITY
        }
    };

    let qa = n2 * d1 - n1 * d2;
    let qb = n2 * d0 - n0 * d2;
    let qc = n1 * d0 - n0 * d1;
    let mut candidates = vec![0.0];
    candidates.extend(
        quadratic_roots(qa, qb, qc)
            .into_iter()
            .map(|a| a.clamp(-cap, cap)),
    );
    candidates.extend([cap, -cap]);

    let mut best = (0.0, objective(0.0));
    for &a in &candidates[1..] {
        let f = objective(a);
        if f < best.1 * (1.0 - 1e-12) {
            best = (a, f);
        }
    }
    best.0
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 || !scale.is_finite() {
        return Vec::new();
    }
    let (a, b, c) = (a / scale, b / scale, c / scale);
    if a.abs() < 1e-300 {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    // Numerically stable pair.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots = vec![q / a];
    if q != 0.0 {
        roots.push(c / q);
    }
    roots.retain(|r| r.is_finite());
    roots
}
