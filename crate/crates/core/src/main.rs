fn main() {
    std::process::exit(nearram::cli::dispatch(std::env::args()));
}
