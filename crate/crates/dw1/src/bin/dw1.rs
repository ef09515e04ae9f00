fn main() {
    std::process::exit(dw1::cli::main_entry());
}
