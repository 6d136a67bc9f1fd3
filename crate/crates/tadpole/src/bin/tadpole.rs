fn main() {
    std::process::exit(tadpole::cli::run(std::env::args_os()));
}
