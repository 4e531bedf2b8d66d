fn main() -> std::process::ExitCode {
    qind::cli::main()
}
