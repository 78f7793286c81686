fn main() {
    std::process::exit(amitsur::cli::run(std::env::args_os()));
}
