fn main() {
    std::process::exit(magicsq::cli::run(std::env::args_os()));
}
