fn main() {
    std::process::exit(freeparse::cli::main());
}
