fn main() {
    std::process::exit(qeuclid::cli::run(std::env::args_os()));
}
