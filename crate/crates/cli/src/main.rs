fn main() {
    std::process::exit(opmono::run(std::env::args_os()));
}
