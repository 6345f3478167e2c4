fn main() {
    std::process::exit(helperrate::cli::run(std::env::args_os()));
}
