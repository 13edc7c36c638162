fn main() {
    std::process::exit(dicke_overlap::cli::main_with_args(std::env::args_os()));
}
