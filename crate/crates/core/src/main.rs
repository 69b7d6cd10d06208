fn main() {
    std::process::exit(qgrass_core::cli::run(std::env::args_os()));
}
