// `B u′ = u + f` with nilpotent `B`: the solution is unique and found in closed form.

use skeleton_solve::odesolve::{self, OdeError};
use skeleton_solve::{fixtures, Tolerances};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let problem = fixtures::example_two_problem();
    let sol = odesolve::solve(&problem, &tol)?;
    let exact = sol.exact.as_ref().expect("closed form on the singular path");
    println!("recursion steps {}", sol.iterations);
    for (j, u) in exact.components().iter().enumerate() {
        println!("u{} = {u}", j + 1);
    }
    assert_eq!(exact, &fixtures::example_two_solution());
    println!("residual {:.2e}", sol.residual);

    match odesolve::solve(&problem.with_c0(vec![1.0]), &tol) {
        Err(e @ OdeError::InitialConditionRejected) => println!("c0 rejected: {e}"),
        other => panic!("expected a rejection, got {other:?}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
