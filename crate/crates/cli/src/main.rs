fn main() {
    std::process::exit(indminor_cli::run(std::env::args().skip(1).collect()));
}
