fn main() -> std::process::ExitCode {
    d2d_caching::cli::main()
}
