fn main() -> std::process::ExitCode {
    symstab::cli::main()
}
