fn main() {
    std::process::exit(rulerlab::cli::run(std::env::args_os()));
}
