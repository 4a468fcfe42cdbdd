fn main() {
    std::process::exit(crflow::cli_io::cli_main(std::env::args()));
}
