fn main() {
    std::process::exit(seqlab_cli::run(std::env::args_os()));
}
