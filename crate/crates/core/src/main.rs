fn main() {
    std::process::exit(sgpsr::cli::run());
}
