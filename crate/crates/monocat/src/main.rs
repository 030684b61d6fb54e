fn main() {
    std::process::exit(monocat::cli::main_with_args(std::env::args_os()));
}
