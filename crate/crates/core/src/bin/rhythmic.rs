fn main() {
    std::process::exit(rhythmic::cli::run(std::env::args_os()));
}
