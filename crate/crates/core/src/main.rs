fn main() {
    std::process::exit(qkc::cli::main_with_args(std::env::args_os()));
}
