fn main() {
    std::process::exit(radosc::cli::run(std::env::args_os()));
}
