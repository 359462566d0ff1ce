fn main() {
    std::process::exit(soficlab::cli::main_with_args(std::env::args_os()));
}
