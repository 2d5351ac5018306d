fn main() {
    std::process::exit(schmidt_osc_cli::run(std::env::args_os()));
}
