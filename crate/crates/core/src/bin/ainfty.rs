fn main() -> std::process::ExitCode {
    ainfty::cli::main_with(std::env::args_os())
}
