fn main() {
    std::process::exit(crossgreen_cli::run(std::env::args_os()));
}
