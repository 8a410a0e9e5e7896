fn main() {
    std::process::exit(commrange::cli::run(std::env::args_os()));
}
