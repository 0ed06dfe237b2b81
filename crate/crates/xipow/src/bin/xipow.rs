fn main() {
    std::process::exit(xipow::cli::run(std::env::args()));
}
