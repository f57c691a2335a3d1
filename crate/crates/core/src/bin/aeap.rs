fn main() {
    std::process::exit(aeap::cli::run(std::env::args_os()));
}
