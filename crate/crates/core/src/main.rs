fn main() {
    std::process::exit(rotdist::cli::run());
}
