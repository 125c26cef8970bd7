fn main() {
    std::process::exit(hjlab::cli::run());
}
