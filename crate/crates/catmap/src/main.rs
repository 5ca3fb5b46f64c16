fn main() {
    std::process::exit(catmap::cli::run(std::env::args_os()));
}
