fn main() {
    std::process::exit(mtdetect::cli::main_entry(std::env::args_os()));
}
