// Rank factorization, kernel bases and guarded inversion.

use skeleton_solve::linops::{invert, null_space_orthonormal, numerical_rank, rank_factorize, DenseMatrix, LinopsError};
use skeleton_solve::{fixtures, Tolerances};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let b = fixtures::example_one_matrix();
    let rf = rank_factorize(&b, tol.rank)?;
    println!("rank {}: A1 = {:?}, A2 = {:?}", rf.rank, rf.left.to_rows(), rf.right.to_rows());
    println!("|A1 A2 - B| = {:.2e}", rf.product().max_diff(&b));

    let s = DenseMatrix::diag(&[2.0, 1.0, 0.0]);
    println!("rank of diag(2, 1, 0): {}", numerical_rank(&s, tol.rank));
    println!("kernel basis {:?}", null_space_orthonormal(&s, tol.null, &tol)?);

    match invert(&s, &tol) {
        Err(e @ LinopsError::Singular { .. }) => println!("inversion refused: {e}"),
        other => println!("inversion: {other:?}"),
    }
    println!("inverse of diag(2, 4) {:?}", invert(&DenseMatrix::diag(&[2.0, 4.0]), &tol)?.to_rows());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
