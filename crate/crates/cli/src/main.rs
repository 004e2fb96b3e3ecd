fn main() {
    std::process::exit(esqpt_lab::run(std::env::args_os()));
}
