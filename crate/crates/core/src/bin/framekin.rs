fn main() {
    std::process::exit(framekin::cli::run(std::env::args_os()));
}
