// Tagged JSON problem files and the command-line driver.

use skeleton_solve::cli;
use skeleton_solve::fixtures;
use skeleton_solve::problem::IrregularProblem;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let problem = IrregularProblem::Ode(fixtures::example_one_problem());
    let json = problem.to_json();
    assert_eq!(IrregularProblem::from_json(&json)?, problem);
    println!("{} problem, {} bytes of JSON", problem.class(), json.len());

    let dir = std::env::temp_dir().join(format!("skeleton-solve-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let input = dir.join("example1.json");
    std::fs::write(&input, json)?;
    let mut out = Vec::new();
    let code = cli::main_with(["skeleton-solve", "solve", input.to_str().unwrap(), "--output-dir", dir.to_str().unwrap()], &mut out);
    print!("{}", String::from_utf8(out)?);
    assert_eq!(code, cli::EXIT_OK);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
