use std::process::ExitCode;

fn main() -> ExitCode {
    cylplane::cli::main_with_args(std::env::args_os())
}
