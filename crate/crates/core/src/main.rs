fn main() {
    std::process::exit(rgg_pursuit::harness::cli::run(std::env::args_os()));
}
