// `B L u = L₁ u + f` with constant-coefficient differential operators in `(x, t)`.

use skeleton_solve::funcalg::{BiSeries, QuasiPoly};
use skeleton_solve::pdesolve::mixed::{solve_mixed, MixedOptions, MixedProblem};
use skeleton_solve::{fixtures, Tolerances};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let opts = MixedOptions::default();
    let problem = fixtures::mixed_problem();
    let sol = solve_mixed(&problem, &opts, &tol)?;
    println!("residual {:.2e}, stages {:?}", sol.report.residual_original, sol.report.residual_stages);
    println!("u(0.2, 0.3) = {:?}", sol.u.eval(0.2, 0.3));

    // manufactured u = x²t³(1, 2, −1) is recovered exactly
    let exact = BiSeries::from_monomials(
        3,
        &[(0, 2, QuasiPoly::monomial(1.0, 3)), (1, 2, QuasiPoly::monomial(2.0, 3)), (2, 2, QuasiPoly::monomial(-1.0, 3))],
    );
    let (l, l1) = fixtures::mixed_operators();
    let f = l.apply_series(&exact).apply(&problem.b).sub(&l1.apply_series(&exact));
    let back = solve_mixed(&MixedProblem { f, ..problem }, &opts, &tol)?;
    println!(
        "manufactured solution error {:.2e}",
        opts.grid.sup(|x, t| back.u.eval(x, t).iter().zip(exact.eval(x, t)).map(|(a, b)| a - b).collect())
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
