fn main() {
    std::process::exit(polyeig_cli::run());
}
