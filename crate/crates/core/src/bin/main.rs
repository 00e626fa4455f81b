fn main() {
    std::process::exit(isoshift::cli::main());
}
