fn main() {
    std::process::exit(chi2geo::cli::run());
}
