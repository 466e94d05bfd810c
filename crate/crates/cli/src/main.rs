use std::process::ExitCode;

fn main() -> ExitCode {
    charforge_cli::cli::run(std::env::args_os())
}
