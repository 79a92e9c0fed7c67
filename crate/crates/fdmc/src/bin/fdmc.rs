fn main() {
    std::process::exit(fdmc::cli::run());
}
