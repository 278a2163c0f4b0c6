fn main() {
    std::process::exit(seqchain::cli::run(std::env::args_os()));
}
