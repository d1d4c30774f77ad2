fn main() {
    std::process::exit(uncertain_eval_cli::run_cli(std::env::args_os()));
}
