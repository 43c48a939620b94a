fn main() {
    std::process::exit(fnclass::cli::main());
}
