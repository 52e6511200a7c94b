fn main() -> std::process::ExitCode {
    ibc::cli::main()
}
