fn main() {
    std::process::exit(setfix::cli::run(std::env::args_os()));
}
