fn main() {
    std::process::exit(ffquad::harness::main_with_args(std::env::args_os()));
}
