fn main() {
    std::process::exit(singosc::cli::run(std::env::args_os()));
}
