fn main() {
    std::process::exit(eatforge_cli::main_with(std::env::args()));
}
