fn main() {
    std::process::exit(parabolic_vqe::cli::main_with_args(std::env::args_os()));
}
