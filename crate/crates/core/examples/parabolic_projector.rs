// Symmetric `B`: the orthogonal-projector path and its agreement with the chain path.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skeleton_solve::pdesolve::parabolic::{projector_split, solve_parabolic, solve_parabolic_projector, ParabolicOptions};
use skeleton_solve::{fixtures, generate, Tolerances};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let b = generate::random_symmetric_singular(&mut rng, 5, 3);
    let split = projector_split(&b, &tol)?;
    println!("random symmetric rank 3: kernel dim {}, identities {:.2e}", split.kernel_basis.len(), split.identities(&b).max());

    let problem = fixtures::parabolic_symmetric_problem();
    let opts = ParabolicOptions::default();
    let chain = solve_parabolic(&problem, &opts, &tol)?;
    let proj = solve_parabolic_projector(&problem, &opts, &tol)?;
    let gap = opts.grid.sup(|x, t| chain.u.eval(x, t).iter().zip(proj.u.eval(x, t)).map(|(a, b)| a - b).collect());
    println!("chain vs projector {gap:.2e}, constraint {:.2e}", proj.report.constraint_violation.unwrap_or(0.0));
    println!("projector residual {:.2e}", proj.report.residual_original);
    assert!(gap <= 1e-4);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
