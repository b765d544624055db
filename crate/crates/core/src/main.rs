fn main() {
    std::process::exit(dual_derham::cli::run());
}
