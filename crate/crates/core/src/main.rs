fn main() {
    std::process::exit(growthfit::cli::main_with_args(std::env::args_os()));
}
