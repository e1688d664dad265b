fn main() {
    let code = heulearn::cli::run_cli(std::env::args_os());
    std::process::exit(code);
}
