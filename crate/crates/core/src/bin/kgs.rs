fn main() {
    std::process::exit(kgs::cli::main_with(std::env::args_os()));
}
