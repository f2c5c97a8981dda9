use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(parafreq::cli::main_from_args(std::env::args()) as u8)
}
