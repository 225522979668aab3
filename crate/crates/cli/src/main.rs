use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(quorder_cli::main_entry() as u8)
}
