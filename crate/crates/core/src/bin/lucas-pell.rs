fn main() {
    std::process::exit(lucas_pell::cli::run(std::env::args_os()));
}
