fn main() {
    std::process::exit(loosemat::cli::run());
}
