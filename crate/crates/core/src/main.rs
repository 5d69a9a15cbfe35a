fn main() {
    std::process::exit(ses_forge::cli::run(std::env::args_os()));
}
