// `∂³_t ∫K(x,s)u ds = ∂²_y u + a u + f` with a separable kernel and Dirichlet data in `y`.

use std::f64::consts::PI;

use skeleton_solve::funcalg::QuasiPoly;
use skeleton_solve::pdesolve::integro::{check_resonance, dirichlet_resolvent, gram_matrix, solve_integro, IntegroOptions};
use skeleton_solve::{fixtures, Tolerances};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let v = dirichlet_resolvent(1.0, &QuasiPoly::constant(1.0))?;
    println!("v'' + v = 1, v(0) = v(1) = 0: v(0.5) = {:.12}", v.eval(0.5));
    println!("resonant a = pi^2 rejected: {}", check_resonance(PI * PI).is_err());

    let problem = fixtures::integro_single_mode_problem();
    println!("Gram matrix {:?}", gram_matrix(&problem.kernel, problem.interval).to_rows());
    let sol = solve_integro(&problem, &IntegroOptions::default(), &tol)?;
    let (x, y, t) = (0.3, 0.5, 0.4);
    println!("u{:?} = {:.12}, oracle {:.12}", (x, y, t), sol.u.eval(x, y, t), fixtures::integro_single_mode_solution(x, y, t));

    let generic = solve_integro(&fixtures::integro_generic_problem(), &IntegroOptions::default(), &tol)?;
    println!("rank-2 kernel residual {:.2e}, trace {:.2e}", generic.report.residual_original, generic.report.ic_violation);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
