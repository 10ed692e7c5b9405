fn main() {
    std::process::exit(nrpn::cli::run());
}
