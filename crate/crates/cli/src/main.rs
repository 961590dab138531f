fn main() {
    std::process::exit(guespec_cli::main_with_args(std::env::args_os()));
}
