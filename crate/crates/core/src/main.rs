fn main() {
    std::process::exit(fueterfrac::cli::run(std::env::args_os()));
}
