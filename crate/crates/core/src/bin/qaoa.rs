fn main() {
    std::process::exit(qaoa_core::cli::main_with_args(std::env::args_os()));
}
