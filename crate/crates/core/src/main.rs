fn main() {
    std::process::exit(biqap::cli::main_entry());
}
