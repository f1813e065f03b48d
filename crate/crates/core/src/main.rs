fn main() {
    std::process::exit(tbc::cli::dispatch(std::env::args_os()));
}
