fn main() {
    std::process::exit(scvi::cli::run(std::env::args_os()));
}
