use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(entrev_cli::run(std::env::args_os()))
}
