// `B ∂ⁿ_t u = a² ∂²_x u + f` on `[0,1]` split into a Kovalevskaya series stage and a heat stage.

use skeleton_solve::pdesolve::parabolic::{solve_parabolic, ParabolicOptions};
use skeleton_solve::pdesolve::{Construction, PdeError};
use skeleton_solve::{fixtures, Tolerances};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let opts = ParabolicOptions::default();
    let sol = solve_parabolic(&fixtures::parabolic_generic_problem(), &opts, &tol)?;
    let r = &sol.report;
    println!("residual {:.2e}, stages {:?}", r.residual_original, r.residual_stages);
    println!("boundary {:.2e}, initial {:.2e}", r.bc_violation, r.ic_violation);
    println!("u(0.5, 0.1) = {:?}", sol.u.eval(0.5, 0.1));
    assert!(r.residual_original <= opts.residual_limit);

    // A₂f = 0: only the heat stage remains
    let killed = solve_parabolic(&fixtures::parabolic_killed_problem(), &opts, &tol)?;
    println!("killed-stage u(0.5, 0.1) = {:?}, heat mode {:.6}", killed.u.eval(0.5, 0.1), fixtures::heat_mode_one(0.5, 0.1));

    let literal = ParabolicOptions { construction: Construction::Literal, ..opts };
    match solve_parabolic(&fixtures::parabolic_generic_problem(), &literal, &tol) {
        Err(PdeError::ResidualTooLarge { residual, limit }) => println!("literal construction: residual {residual:.2e} > {limit:.1e}"),
        other => println!("literal construction: {:?}", other.map(|s| s.report.residual_original)),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
