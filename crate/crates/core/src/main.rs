fn main() {
    std::process::exit(cantor_calculus::cli::run_from_args(std::env::args_os()));
}
