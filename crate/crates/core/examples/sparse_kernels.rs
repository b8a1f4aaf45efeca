// Compressed-column storage, the two matrix-vector kernels and the
// implicit covariance operator A v = X (Xᵀ v).
//
//     cargo run --example sparse_kernels

use aggpca::sparse::{orthonormalize, CovarianceOperator, SparseMatrix};

fn run_example() -> aggpca::Result<()> {
    // 3 terms x 2 documents, row-major
    let x = SparseMatrix::from_dense(3, 2, &[2.0, 0.0, 1.0, 1.0, 0.0, 1.0])?;
    println!(
        "X: {}x{} with {} stored entries",
        x.rows(),
        x.cols(),
        x.nnz()
    );
    println!("X [1, 1]   = {:?}", x.spmv(&[1.0, 1.0])?);
    println!("Xᵀ[1, 1, 1] = {:?}", x.spmv_t(&[1.0, 1.0, 1.0])?);

    let op = CovarianceOperator::new(x.clone());
    let av = op.apply(&[1.0, 0.0, 0.0])?;
    println!("A e1 = {av:?} (first column of X Xᵀ)");

    let centered = CovarianceOperator::centered(x);
    println!("centered A e1 = {:?}", centered.apply(&[1.0, 0.0, 0.0])?);
    println!(
        "operator applies so far: {} + {}",
        op.apply_count(),
        centered.apply_count()
    );

    // A rank-deficient block: the duplicate gets replaced by a seeded
    // random direction.
    let mut block = vec![
        vec![1.0, 0.0, 0.0],
        vec![2.0, 0.0, 0.0],
        vec![0.0, 1.0, 1.0],
    ];
    let report = orthonormalize(&mut block, 7)?;
    println!(
        "orthonormalized block {block:?}, replaced {:?}",
        report.replaced
    );
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
