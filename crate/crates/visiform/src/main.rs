fn main() {
    visiform::cli::main_entry()
}
