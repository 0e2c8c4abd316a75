fn main() {
    std::process::exit(smoothgame::cli::run(std::env::args_os()));
}
