fn main() {
    std::process::exit(stripmix::cli::run(std::env::args_os()));
}
