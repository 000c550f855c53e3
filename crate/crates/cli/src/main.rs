fn main() {
    std::process::exit(coherence_cli::main_with_args(std::env::args_os()));
}
