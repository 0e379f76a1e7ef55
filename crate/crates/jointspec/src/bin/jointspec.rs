fn main() {
    std::process::exit(jointspec::cli::run_from_args(std::env::args()));
}
