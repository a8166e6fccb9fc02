fn main() {
    std::process::exit(ris_sense::cli::run(std::env::args_os()));
}
