fn main() {
    std::process::exit(fillscope::cli::run(std::env::args_os()));
}
