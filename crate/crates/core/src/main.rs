fn main() {
    std::process::exit(kitaev_cylinder::cli::main_with_args(std::env::args_os()));
}
