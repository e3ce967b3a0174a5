fn main() {
    std::process::exit(statdisc::cli::main_with_args(std::env::args_os()));
}
