fn main() {
    std::process::exit(ocs::cli::run(std::env::args_os()));
}
