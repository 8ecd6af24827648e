fn main() {
    std::process::exit(gmk_core::cli::main_with_args(std::env::args_os()));
}
