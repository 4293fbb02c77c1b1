fn main() {
    std::process::exit(schatten_resolvent::harness::run_cli(std::env::args_os()));
}
