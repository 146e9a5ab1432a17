fn main() {
    std::process::exit(cnsdist::cli::main_with_args(std::env::args_os()));
}
