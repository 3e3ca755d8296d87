fn main() {
    std::process::exit(shapeboot::cli::run(std::env::args_os()));
}
