// The projector weight alpha on a dense toy problem: the published closed
// form, the exact minimizer of the unnormalized residual, and a scan of
// the residual to confirm the minimizer.
//
//     cargo run --example alpha_weights

use aggpca::eigensolver::{alpha_compute, alpha_terms, AlphaMode, Projector};

fn matvec(a: &[[f64; 3]; 3], v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn run_example() -> aggpca::Result<()> {
    let a = [[3.0, 0.2, 0.0], [0.2, 2.0, 0.1], [0.0, 0.1, 1.0]];
    // An imperfect coarse vector near the top eigenvector.
    let q = {
        let v = [1.0, 0.15, 0.05];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter().map(|x| x / n).collect::<Vec<_>>()
    };
    let w = matvec(&a, &q);
    let z = matvec(&a, &w);
    let proj = Projector::from_parts(q, w, z, 3.0);
    let u = vec![0.6, 0.6, 0.28f64.sqrt()];
    let au = matvec(&a, &u);
    let lambda = u.iter().zip(&au).map(|(x, y)| x * y).sum::<f64>();

    let t = alpha_terms(&u, &au, &proj, lambda);
    println!(
        "numerators: paper {:.12}  derived {:.12}",
        t.paper_numerator, t.derived_numerator
    );
    println!(
        "denominators: paper {:.6}  derived {:.6}",
        t.paper_denominator, t.derived_denominator
    );
    for mode in [AlphaMode::Paper, AlphaMode::Derived] {
        println!(
            "alpha[{mode}] = {:.6}",
            alpha_compute(&u, &au, None, &proj, lambda, mode, 1e6)
        );
    }

    // |(A - λ)(Au + α s c q)| along a grid
    let c = u.iter().zip(&proj.q).map(|(x, y)| x * y).sum::<f64>();
    let phi = |alpha: f64| {
        let v: Vec<f64> = au
            .iter()
            .zip(&proj.q)
            .map(|(x, qi)| x + alpha * proj.s * c * qi)
            .collect();
        let av = matvec(&a, &v);
        av.iter()
            .zip(&v)
            .map(|(x, y)| (x - lambda * y).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let best = (-4000..=4000)
        .map(|k| k as f64 * 1e-3)
        .min_by(|p, q| phi(*p).total_cmp(&phi(*q)))
        .unwrap();
    println!("grid minimizer of the residual: {best:.3}");
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
