fn main() {
    std::process::exit(fraccolor::cli::main_with_args(std::env::args_os()));
}
