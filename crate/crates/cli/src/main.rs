fn main() {
    std::process::exit(blowup_cli::run(std::env::args_os()));
}
