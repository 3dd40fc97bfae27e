fn main() {
    skeleton_solve::cli::init_logging();
    let code = skeleton_solve::cli::main_with(std::env::args_os(), &mut std::io::stdout());
    std::process::exit(code);
}
