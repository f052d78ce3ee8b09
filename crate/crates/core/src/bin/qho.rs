fn main() {
    std::process::exit(qho_core::experiment::cli_main(std::env::args_os()));
}
