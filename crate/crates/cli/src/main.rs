fn main() {
    std::process::exit(twopoint_cli::main_with_args(std::env::args_os()));
}
