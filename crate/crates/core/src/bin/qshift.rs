fn main() -> std::process::ExitCode {
    qshift::cli::main()
}
