fn main() {
    std::process::exit(robertson::cli::run(std::env::args_os()));
}
