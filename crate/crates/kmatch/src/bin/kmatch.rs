fn main() {
    std::process::exit(kmatch::cli::run(std::env::args()));
}
