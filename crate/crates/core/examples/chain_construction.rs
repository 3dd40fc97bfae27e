// Skeleton chains of the reference matrices and of a seeded random matrix.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skeleton_solve::chain::{build_chain, nilpotency_check, verify_power_identity, Nilpotency};
use skeleton_solve::{fixtures, generate, Tolerances};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cases = [
        ("regular, length 1", fixtures::example_one_matrix()),
        ("nilpotent, index 2", fixtures::example_two_matrix()),
        ("Jordan block, index 4", fixtures::jordan_four()),
        ("random 8x8", generate::random_singular(&mut rng, 8)),
    ];
    for (name, b) in cases {
        let chain = build_chain(&b, tol.rank, &tol)?;
        let res = chain.identity_residuals();
        let power = (1..=chain.length + 1).map(|n| verify_power_identity(&chain, n)).collect::<Result<Vec<_>, _>>()?;
        println!("{name}: {:?} chain, length {}, dimensions {:?}", chain.kind, chain.length, chain.dimensions());
        println!("  identity residual {:.2e}, power identity {:.2e}", res.max(), power.iter().fold(0.0f64, |m, &x| m.max(x)));
        assert!(res.max() <= tol.chain);
        if let Nilpotency::Nilpotent { index } = nilpotency_check(&chain, &tol)? {
            println!("  nilpotent of index {index}");
            assert!(b.power(index).max_norm() <= tol.chain);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
