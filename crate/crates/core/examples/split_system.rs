// The regular equations produced by the chain, checked on the closed-form ODE solution.

use skeleton_solve::funcalg::QuasiPolyVector;
use skeleton_solve::pdesolve::operator::{reduce_split_system, PolyDiffOp};
use skeleton_solve::{fixtures, Tolerances};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let system = reduce_split_system(&fixtures::example_one_matrix(), &PolyDiffOp::d_t(), &PolyDiffOp::identity(), &tol)?;
    for eq in &system.equations {
        println!("{:?} equation for u{} (dimension {})", eq.role, eq.index, eq.dim);
    }
    let u = fixtures::example_one_solution();
    let stages: Vec<QuasiPolyVector> = (0..=system.chain.length).map(|i| system.chain.projection(i).apply(&u)).collect();
    let ts: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let res = system.residuals_t(&stages, &fixtures::example_one_problem().f, &ts)?;
    println!("equation residuals {res:?}");
    assert!(res.iter().all(|&r| r <= 1e-12));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
