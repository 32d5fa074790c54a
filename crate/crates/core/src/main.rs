fn main() {
    std::process::exit(envelope::cli::run(std::env::args_os()));
}
