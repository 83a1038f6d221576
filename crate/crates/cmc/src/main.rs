fn main() {
    std::process::exit(cmc::run(std::env::args_os()));
}
