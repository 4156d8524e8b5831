fn main() {
    std::process::exit(linshadow::cli::run(std::env::args_os()));
}
