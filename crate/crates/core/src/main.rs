fn main() {
    std::process::exit(lotree::cli::main_with(std::env::args_os()));
}
