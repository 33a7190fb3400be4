fn main() {
    std::process::exit(acoustic_lattice::cli::main_with_args(std::env::args_os()));
}
