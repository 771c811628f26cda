fn main() {
    std::process::exit(eigenmeasure_cli::run(std::env::args().skip(1)));
}
