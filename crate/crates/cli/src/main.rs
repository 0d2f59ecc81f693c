fn main() {
    std::process::exit(palinfrac_cli::run(std::env::args_os()));
}
