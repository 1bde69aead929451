fn main() {
    std::process::exit(eisenzeros::cli::run(std::env::args_os()));
}
