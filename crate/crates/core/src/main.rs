fn main() {
    std::process::exit(phononic::cli::main());
}
