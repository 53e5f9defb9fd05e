fn main() {
    std::process::exit(vaxcred::cli::dispatch(std::env::args_os()));
}
