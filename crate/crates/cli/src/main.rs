fn main() {
    std::process::exit(exg_cli::main_with_args(std::env::args_os()));
}
