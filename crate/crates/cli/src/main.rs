fn main() {
    std::process::exit(torsionlab_cli::run(std::env::args_os()));
}
