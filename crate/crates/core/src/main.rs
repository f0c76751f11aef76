fn main() {
    std::process::exit(qdirac::cli::main_with_args(std::env::args_os()));
}
