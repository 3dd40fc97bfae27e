// `B u′ = u + f` through a regular chain: the Example 1 system with `f = (0, t, 0)`.

use skeleton_solve::{fixtures, odesolve, Tolerances};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let problem = fixtures::example_one_problem();
    let sol = odesolve::solve(&problem, &tol)?;
    let err = sol.u.max_error(&fixtures::example_one_solution());
    println!("chain length {}, {} grid points", sol.chain.length, sol.u.len());
    println!("max error vs closed form {err:.2e}");
    println!("residual {:.2e} (limit {:.2e})", sol.residual, sol.residual_limit);
    println!("stage consistency {:.2e}", sol.stage_consistency());
    println!("u(1) = {:?}", sol.u.last().unwrap());
    assert!(err <= 1e-7 && sol.residual <= sol.residual_limit);

    // a free constant for the terminal stage
    let shifted = odesolve::solve(&problem.clone().with_c0(vec![1.0]), &tol)?;
    println!("with c0 = [1]: u(1) = {:?}", shifted.u.last().unwrap());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
