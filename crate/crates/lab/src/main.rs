fn main() {
    std::process::exit(lrs_lab::cli::run(std::env::args_os()));
}
