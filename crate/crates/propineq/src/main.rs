fn main() {
    std::process::exit(propineq::cli::run(std::env::args()));
}
