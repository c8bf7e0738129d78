fn main() {
    std::process::exit(so3inv::cli::main_with_args(std::env::args_os()));
}
