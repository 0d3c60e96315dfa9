fn main() {
    std::process::exit(multiaffine_cli::run(std::env::args_os()));
}
