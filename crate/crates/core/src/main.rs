fn main() {
    std::process::exit(aggpca::cli::main_with_args(std::env::args_os()));
}
