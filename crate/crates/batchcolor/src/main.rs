fn main() {
    std::process::exit(batchcolor::cli::run());
}
