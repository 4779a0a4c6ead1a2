fn main() {
    std::process::exit(tbm::cli::run(std::env::args_os()));
}
