fn main() {
    std::process::exit(pairdisc::cli::run(std::env::args_os()));
}
