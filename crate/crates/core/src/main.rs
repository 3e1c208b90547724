fn main() {
    std::process::exit(globcraft::cli::run(std::env::args_os()));
}
