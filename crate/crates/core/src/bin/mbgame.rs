fn main() {
    std::process::exit(makerbreaker::cli::main());
}
