fn main() {
    std::process::exit(rpverify::cli::main_with_args(std::env::args_os()));
}
