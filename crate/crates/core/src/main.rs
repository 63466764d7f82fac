fn main() {
    std::process::exit(radon_core::cli::run(std::env::args_os()));
}
